use std::process::ExitCode;

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("TRUNKWEAVE_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                    .expect("thread pool is configured once");
            }
            _ => {
                eprintln!("error: TRUNKWEAVE_THREADS must be a positive integer, got {threads:?}");
                return ExitCode::from(trunkweave::cli::EXIT_INPUT_ERROR as u8);
            }
        }
    }
    let args: Vec<String> = std::env::args().skip(1).collect();
    let code =
        trunkweave::cli::main_with_args(&args, &mut std::io::stdout(), &mut std::io::stderr());
    ExitCode::from(code as u8)
}
