fn main() {
    std::process::exit(g2_monodromy::cli::dispatch(std::env::args_os()));
}
