// Drives a command-line experiment from code: builds a config, prints its resolved TOML, runs
// it and lists the artifacts, all stamped with the manifest hash.

use fracgo::cli::{self, ExperimentConfig, ExperimentKind};

pub fn run() -> fracgo::Result<()> {
    let mut config = ExperimentConfig::new(ExperimentKind::ExpansionCheck);
    config.s = Some(0.6);
    println!("{}", config.resolve()?.to_toml()?);
    let out = std::env::temp_dir().join("fracgo-example");
    let outcome = cli::run(&config, &out)?;
    println!("{}", outcome.summary());
    for name in &outcome.artifacts {
        println!("wrote {}", outcome.dir.join(name).display());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
