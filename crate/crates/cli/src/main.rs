use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let response = sympolar_cli::run(std::env::args().collect(), &mut std::io::stdin().lock());
    print!("{}", response.stdout);
    eprint!("{}", response.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(response.code as u8)
}
