//! Named parameter regimes for the built-in presets.
//!
//! Each preset fixes detunings, κ_j and G_j (both members of a pair set equal,
//! except the thermal set which gives κ_a and κ_c separately). Axis ranges
//! default to these windows: detunings over [0, 2] and
//! [−2, 0], κ_j over [0.001, 0.1], G_j over [0, 0.01], T over [0, 1000] K.

use super::{Axis, AxisParam, MeasureSet, SweepSpec};
use crate::error::{Error, Result};
use crate::measures::Bipartition;
use crate::model::{thermal_occupation, EffectiveParams, OMEGA_M_SI};

pub const PRESET_NAMES: [&str; 27] = [
    "fig2a", "fig2b", "fig2c", "fig3a", "fig3b", "fig3c", "fig4a", "fig4b", "fig4c", "fig5a",
    "fig5b", "fig5c", "fig6a", "fig6b", "fig6c", "fig7a", "fig7b", "fig7c", "fig8a", "fig8b",
    "fig8c", "fig9a", "fig9b", "fig9c", "fig10a", "fig10b", "fig10c",
];

const GAMMA_M: f64 = 0.005;
const ROOM_TEMPERATURE: f64 = 210.0;
const DEFAULT_STEPS: usize = 101;

const PAIRS: [Bipartition; 3] = [Bipartition::CA, Bipartition::BA, Bipartition::BC];

fn detuning_axes() -> (Axis, Axis) {
    (
        Axis::linear(AxisParam::DeltaAEff, 0.0, 2.0, DEFAULT_STEPS),
        Axis::linear(AxisParam::DeltaC, -2.0, 0.0, DEFAULT_STEPS),
    )
}

fn room(delta_a: f64, delta_c: f64, kappa: f64, g: f64) -> EffectiveParams {
    let n_th = thermal_occupation(OMEGA_M_SI, ROOM_TEMPERATURE);
    EffectiveParams::joint(delta_a, delta_c, g, kappa, GAMMA_M, n_th)
}

fn spec(
    name: &str,
    base: EffectiveParams,
    temperature: Option<f64>,
    axis1: Axis,
    axis2: Option<Axis>,
    pair: Bipartition,
    measures: Vec<MeasureSet>,
) -> SweepSpec {
    let mut s = SweepSpec::new(name, base, axis1);
    s.axis2 = axis2;
    s.temperature = temperature;
    s.bipartitions = vec![pair];
    s.measures = measures;
    s.description = describe(&s);
    s
}

fn describe(s: &SweepSpec) -> String {
    let pair = s.bipartitions[0];
    let labels: Vec<String> = s
        .measures
        .iter()
        .flat_map(|m| m.kinds().iter().take(1).map(move |k| k.label(pair)))
        .collect();
    let axes = match s.axis2 {
        Some(ax2) => format!("{} x {}", s.axis1.parameter, ax2.parameter),
        None => s.axis1.parameter.to_string(),
    };
    format!("{} vs {}", labels.join(", "), axes)
}

/// Resolves a figure preset by name (`fig2a` .. `fig10c`).
pub fn figure_preset(name: &str) -> Result<SweepSpec> {
    let unknown = || Error::UnknownPreset(name.to_string());
    let rest = name.strip_prefix("fig").ok_or_else(unknown)?;
    if rest.len() < 2 {
        return Err(unknown());
    }
    let (num, panel) = rest.split_at(rest.len() - 1);
    let figure: u32 = num.parse().map_err(|_| unknown())?;
    let idx = match panel {
        "a" => 0,
        "b" => 1,
        "c" => 2,
        _ => return Err(unknown()),
    };
    let pair = PAIRS[idx];
    let room_t = Some(ROOM_TEMPERATURE);
    let all = vec![MeasureSet::Entanglement, MeasureSet::SteeringBoth, MeasureSet::DiscordBoth];

    let s = match figure {
        2..=4 => {
            let measure = [MeasureSet::Entanglement, MeasureSet::SteeringBoth, MeasureSet::DiscordBoth]
                [(figure - 2) as usize];
            // panel (a) is the narrow-cavity regime, (b) and (c) the broad one
            let (kappa, g) = if idx == 0 { (0.003, 0.003) } else { (0.05, 0.005) };
            let (ax1, ax2) = detuning_axes();
            spec(name, room(1.0, -1.0, kappa, g), room_t, ax1, Some(ax2), pair, vec![measure])
        }
        5..=7 => {
            let measure = [MeasureSet::Entanglement, MeasureSet::SteeringBoth, MeasureSet::DiscordBoth]
                [(figure - 5) as usize];
            let delta_a = match (figure, idx) {
                (6, 1) => 0.005,
                (_, 1) => 0.5,
                _ => 1.0,
            };
            let ax1 = Axis::linear(AxisParam::KappaJoint, 0.001, 0.1, DEFAULT_STEPS);
            let ax2 = Axis::linear(AxisParam::GJoint, 0.0, 0.01, DEFAULT_STEPS);
            spec(name, room(delta_a, -1.0, 0.003, 0.003), room_t, ax1, Some(ax2), pair, vec![measure])
        }
        8 => {
            let delta_a = if idx == 1 { 0.005 } else { 1.0 };
            let mut base = room(delta_a, -1.0, 1.0, 0.003);
            base.kappa_c = 0.0166;
            // every cell takes n_th from its temperature
            base.n_th = 0.0;
            let ax1 = Axis::linear(AxisParam::GJoint, 0.0, 0.01, DEFAULT_STEPS);
            let ax2 = Axis::linear(AxisParam::Temperature, 0.0, 1000.0, DEFAULT_STEPS);
            spec(name, base, None, ax1, Some(ax2), pair, vec![MeasureSet::Entanglement])
        }
        9 => {
            let base = match idx {
                0 => room(1.0, -1.0, 0.003, 0.003),
                1 => room(1.0, -0.5, 0.05, 0.005),
                _ => room(1.0, -1.0, 0.05, 0.005),
            };
            let ax = Axis::linear(AxisParam::DeltaAEff, 0.0, 2.0, DEFAULT_STEPS);
            spec(name, base, room_t, ax, None, pair, all)
        }
        10 => {
            let base = match idx {
                0 => room(1.0, -0.99, 0.003, 0.003),
                1 => room(0.5, -0.5, 0.05, 0.005),
                _ => room(1.5, -1.0, 0.05, 0.005),
            };
            let ax = Axis::linear(AxisParam::GJoint, 0.0, 0.01, DEFAULT_STEPS);
            spec(name, base, room_t, ax, None, pair, all)
        }
        _ => return Err(unknown()),
    };
    Ok(s)
}

/// One row of the preset listing.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: String,
    pub spec: SweepSpec,
}

impl PresetInfo {
    /// `key=value` pairs of the resolved parameters, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, String)> {
        let s = &self.spec;
        let b = &s.base;
        let axis = |a: &Axis| format!("{}[{}:{}]x{}", a.parameter, a.min, a.max, a.steps);
        let mut out = vec![
            ("name", self.name.to_string()),
            ("pair", s.bipartitions.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("+")),
            ("axis1", axis(&s.axis1)),
            ("axis2", s.axis2.as_ref().map_or("-".to_string(), axis)),
            ("delta_a_eff", b.delta_a_eff.to_string()),
            ("delta_c", b.delta_c.to_string()),
            ("kappa_a", b.kappa_a.to_string()),
            ("kappa_c", b.kappa_c.to_string()),
            ("g_a_lin", b.g_a_lin.to_string()),
            ("g_c", b.g_c.to_string()),
            ("gamma_m", b.gamma_m.to_string()),
        ];
        out.push(("temperature", s.temperature.map_or("axis".to_string(), |t| t.to_string())));
        out.push(("n_th", format!("{:.6e}", b.n_th)));
        out
    }
}

pub fn preset_catalog() -> Vec<PresetInfo> {
    PRESET_NAMES
        .iter()
        .map(|&name| {
            let spec = figure_preset(name).expect("catalog names resolve");
            PresetInfo { name, description: spec.description.clone(), spec }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_name_resolves_and_validates() {
        for name in PRESET_NAMES {
            let s = figure_preset(name).unwrap();
            s.validate().unwrap();
            assert_eq!(s.name, name);
            assert_eq!(s.base.gamma_m, 0.005);
        }
        assert_eq!(preset_catalog().len(), 27);
    }

    #[test]
    fn unknown_names_are_rejected() {
        for bad in ["fig1a", "fig2d", "fig11a", "fig", "2a", "fig2", "figxa"] {
            assert!(matches!(figure_preset(bad), Err(Error::UnknownPreset(_))), "{bad}");
        }
    }

    #[test]
    fn narrow_cavity_detuning_map() {
        let s = figure_preset("fig2a").unwrap();
        assert_eq!((s.base.kappa_a, s.base.kappa_c), (0.003, 0.003));
        assert_eq!((s.base.g_a_lin, s.base.g_c), (0.003, 0.003));
        assert_eq!(s.axis1.parameter, AxisParam::DeltaAEff);
        assert_eq!(s.axis2.unwrap().parameter, AxisParam::DeltaC);
        assert_eq!(s.headline(), "E_ca");
        let n = thermal_occupation(OMEGA_M_SI, 210.0);
        assert_eq!(s.base.n_th, n);
        assert!(n > 1e-3 && n < 2e-3);
    }

    #[test]
    fn thermal_preset() {
        let s = figure_preset("fig8c").unwrap();
        assert_eq!(s.bipartitions, vec![Bipartition::BC]);
        assert_eq!(s.axis1.parameter, AxisParam::GJoint);
        let t = s.axis2.unwrap();
        assert_eq!((t.parameter, t.min, t.max), (AxisParam::Temperature, 0.0, 1000.0));
        assert_eq!((s.base.kappa_a, s.base.kappa_c), (1.0, 0.0166));
        assert_eq!((s.base.delta_a_eff, s.base.delta_c), (1.0, -1.0));
    }

    #[test]
    fn line_cut_requests_every_measure() {
        let s = figure_preset("fig9a").unwrap();
        assert!(s.axis2.is_none());
        assert_eq!(s.base.delta_c, -1.0);
        assert_eq!(s.measures.len(), 3);
        assert_eq!(s.headline(), "ca");
        assert_eq!(figure_preset("fig10a").unwrap().base.delta_c, -0.99);
    }
}
