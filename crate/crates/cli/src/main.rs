use std::io::Write;

fn main() {
    let out = adcalc_cli::run(std::env::args_os());
    print!("{}", out.stdout);
    std::io::stdout().flush().ok();
    eprint!("{}", out.stderr);
    std::process::exit(out.exit_code);
}
