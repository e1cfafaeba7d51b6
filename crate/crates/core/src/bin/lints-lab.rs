fn main() {
    std::process::exit(lints_lab::cli::dispatch(std::env::args_os().skip(1)));
}
