use clap::Parser;
use qrma_cli::Cli;

fn main() {
    let cli = Cli::parse();
    if let Err(e) = qrma_cli::run(&cli) {
        eprintln!("qrma: {e}");
        std::process::exit(e.exit_code());
    }
}
