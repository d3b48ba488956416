use clap::Parser;

fn main() {
    let cli = gcverify::cli::Cli::parse();
    std::process::exit(gcverify::cli::main_with(cli));
}
