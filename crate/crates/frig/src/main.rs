use clap::Parser;

fn main() {
    let cli = frig::cli::Cli::parse();
    if let Err(e) = frig::cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
