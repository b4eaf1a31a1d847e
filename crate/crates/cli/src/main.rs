use pulsekick_cli::{parse_args, run, CliError};

fn main() {
    let code = match parse_args(std::env::args().skip(1)) {
        Ok(cfg) => run(&cfg),
        Err(CliError::Help(text)) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
