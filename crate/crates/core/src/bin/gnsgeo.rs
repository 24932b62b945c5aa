fn main() {
    std::process::exit(gns_geometry::cli::dispatch(std::env::args_os()));
}
