fn main() {
    std::process::exit(tissot::cli::dispatch_env());
}
