use spin_energy::io::cli;

fn main() {
    if let Err(e) = cli::init_threads() {
        eprintln!("error: {e}");
        std::process::exit(cli::EXIT_USAGE);
    }
    std::process::exit(cli::main_with_args(std::env::args_os()));
}
