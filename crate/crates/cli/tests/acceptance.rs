use std::process::ExitCode;

use kzq::config;
use kzq::corpus::Corpus;

fn main() -> ExitCode {
    let provider = match config::provider(&config::data_dir(), &[]) {
        Ok(p) => p,
        Err(e) => {
            println!("FAIL  0 setup                {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let mut corpus = match Corpus::new(provider, 0) {
        Ok(c) => c,
        Err(e) => {
            println!("FAIL  0 setup                {e:#}");
            return ExitCode::FAILURE;
        }
    };
    let result = corpus.run();
    for o in &result.results {
        println!("{o}");
    }
    println!("{}", result.summary);
    if result.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
