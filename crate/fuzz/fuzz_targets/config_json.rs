#![no_main]

use libfuzzer_sys::fuzz_target;
use qrma_cli::config::{Command, FileConfig, Flags, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = FileConfig::from_json(text) {
        for command in [
            Command::Spectrum,
            Command::Dynamics,
            Command::Wspec,
            Command::Crossings,
        ] {
            let cfg = RunConfig::resolve(command, &file, &Flags::default());
            if cfg.validate().is_ok() {
                assert!(cfg.f_steps >= 1 && cfg.levels >= 1);
                assert!(cfg.epsilon >= 0.0 && cfg.t_max > 0.0);
                assert!(cfg.base_params().is_ok());
            }
        }
    }
});
