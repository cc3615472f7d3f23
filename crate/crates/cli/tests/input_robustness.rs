//! Config files and argument vectors from arbitrary text never panic.

use clap::Parser;
use proptest::prelude::*;
use qrma_cli::config::{Cli, Command, FileConfig, Flags, RunConfig};

const KEYS: &[&str] = &[
    "big_delta",
    "osc_delta",
    "f_min",
    "f_max",
    "f_steps",
    "levels",
    "n_max",
    "epsilon",
    "t_max",
    "samples",
    "window",
    "format",
    "out",
    "long",
    "series",
    "bogus",
];

const TOKENS: &[&str] = &[
    "spectrum",
    "ground",
    "photon",
    "dynamics",
    "wspec",
    "crossings",
    "--big-delta",
    "--osc-delta",
    "--f",
    "--f-min",
    "--f-max",
    "--f-steps",
    "--levels",
    "--n-max",
    "--epsilon",
    "--t-max",
    "--samples",
    "--window",
    "--format",
    "--long",
    "--series",
    "auto",
    "hann",
    "none",
    "json",
    "csv",
    "rwa",
    "exact",
    "0",
    "1",
    "-1",
    "0.5",
    "1e308",
    "NaN",
    "inf",
    "18446744073709551616",
    "--",
    "-x",
];

fn json_value() -> impl Strategy<Value = String> {
    prop_oneof![
        any::<f64>().prop_map(|x| if x.is_finite() {
            format!("{x:e}")
        } else {
            "null".into()
        }),
        any::<i64>().prop_map(|i| i.to_string()),
        "[a-z]{0,6}".prop_map(|s| format!("\"{s}\"")),
        Just("true".to_string()),
        Just("[]".to_string()),
        Just("{}".to_string()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn config_json_never_panics(entries in prop::collection::vec((prop::sample::select(KEYS), json_value()), 0..8)) {
        let body: Vec<String> = entries.iter().map(|(k, v)| format!("\"{k}\": {v}")).collect();
        let text = format!("{{{}}}", body.join(","));
        if let Ok(file) = FileConfig::from_json(&text) {
            for command in [Command::Spectrum, Command::Wspec] {
                let cfg = RunConfig::resolve(command, &file, &Flags::default());
                if cfg.validate().is_ok() {
                    prop_assert!(cfg.base_params().is_ok());
                }
            }
        }
    }

    #[test]
    fn raw_bytes_as_config(text in "\\PC{0,64}") {
        let _ = FileConfig::from_json(&text);
    }

    #[test]
    fn argument_vectors_never_panic(tokens in prop::collection::vec(prop::sample::select(TOKENS), 0..10)) {
        let args = std::iter::once("qrma").chain(tokens.iter().copied());
        if let Ok(cli) = Cli::try_parse_from(args) {
            let cfg = RunConfig::resolve(cli.command, &FileConfig::default(), &cli.flags);
            if cfg.validate().is_ok() {
                prop_assert!(cfg.samples >= 2 && cfg.f_steps >= 1);
            }
        }
    }
}
