//! Scenario files, named presets, sweeps and artifact emission.

pub mod config;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{load_config, FreqSpec, OutputSettings, ScenarioConfig, SpectrumSettings, TolMatch};
pub use presets::{preset, PRESET_NAMES};
pub use run::{run_scenario, run_sweep, Analysis, ScenarioReport, SweepAxis, SweepReport};

/// Preset name or path to a config file.
pub fn resolve_scenario(name_or_path: &str) -> crate::Result<ScenarioConfig> {
    if PRESET_NAMES.contains(&name_or_path) {
        preset(name_or_path)
    } else if std::path::Path::new(name_or_path).exists() {
        load_config(name_or_path)
    } else {
        Err(crate::Error::UnknownPreset(name_or_path.to_string()))
    }
}
