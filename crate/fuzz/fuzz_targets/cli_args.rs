#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use qrma_cli::config::{Cli, FileConfig, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let args: Vec<&str> = std::iter::once("qrma")
        .chain(text.split_whitespace().take(64))
        .collect();
    if let Ok(cli) = Cli::try_parse_from(args) {
        // the config file is not read here; only flag handling is exercised
        let cfg = RunConfig::resolve(cli.command, &FileConfig::default(), &cli.flags);
        if cfg.validate().is_ok() {
            assert!(cfg.samples >= 2);
            if cli.flags.f.is_some() {
                assert_eq!(cfg.f_steps, 1);
                assert_eq!(cfg.f_min, cfg.f_max);
            }
        }
    }
});
