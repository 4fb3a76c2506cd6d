use clap::Parser;

fn main() {
    let cli = qshift_cli::Cli::parse();
    if let Err(e) = qshift_cli::run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
