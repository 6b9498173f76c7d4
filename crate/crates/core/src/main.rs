use clap::Parser;
use subspace_lrr::cli::{self, Cli};

fn main() {
    let parsed = Cli::parse();
    let code = match cli::run(parsed) {
        Ok(code) => code.code(),
        Err(e) => {
            eprintln!("error: {e}");
            cli::ExitCode::Usage.code()
        }
    };
    std::process::exit(code);
}
