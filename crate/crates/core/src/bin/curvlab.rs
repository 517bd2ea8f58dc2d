fn main() {
    std::process::exit(curvlab::workbench::cli::run(std::env::args_os()));
}
