fn main() {
    std::process::exit(miscluster::cli::run(std::env::args_os()));
}
