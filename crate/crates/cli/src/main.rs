use std::collections::HashMap;
use std::io::{Read, Write};
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut stdin = String::new();
    if args.iter().any(|a| a == "-") {
        let _ = std::io::stdin().read_to_string(&mut stdin);
    }
    let env: HashMap<String, String> = std::env::vars().collect();
    let out = lambek_cli::run(&args, &stdin, &env);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
