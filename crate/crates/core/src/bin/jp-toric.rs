fn main() {
    std::process::exit(jp_toric::cli::run(std::env::args_os()));
}
