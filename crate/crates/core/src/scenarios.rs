//! Scenario presets, per-point rate evaluation, sweeps, intensity
//! optimization and secure-distance solving.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::decoy::{estimate_from_decoys, modeled_observations};
use crate::error::{Error, FieldError, Result};
use crate::hardware::{
    entangled_link_quantities, link_quantities, system_transmittance, yield_n, ChannelSpec,
    DetectorSpec, HardwareConfig, LinkQuantities, PhotonSource, ProtocolKind, ProtocolSpec,
    SourceKind, BACKGROUND_ERROR, DEFAULT_EC_EFFICIENCY,
};
use crate::numerics::{bisect_root, maximize_scalar, DEFAULT_N_MAX};
use crate::rates::{
    bits_per_second, rate_entangled_parts, rate_one_way_parts, rate_two_way_parts, RatePoint,
    TwoWayTransform,
};

/// Rate below which a link no longer counts as secure, in bits per pulse.
pub const DEFAULT_RATE_FLOOR: f64 = 1e-9;
/// Upper end of the secure-distance search.
pub const MAX_DISTANCE_KM: f64 = 500.0;
/// Longest accepted sweep grid.
pub const MAX_GRID_POINTS: usize = 2048;
/// Search interval for the mean photon number.
pub const MEAN_PHOTON_RANGE: (f64, f64) = (1e-4, 1.0);
/// Decoy intensities given to a protocol switched to active decoys.
pub const DEFAULT_DECOYS: [f64; 2] = [0.0, 0.05];

pub const CSV_HEADER: &str = "length_km,secret_rate_bits_per_pulse,bits_per_second,Q,E,omega,e1";

const DEFAULT_REP_RATE: f64 = 1e6;

/// A fully resolved protocol + hardware + source combination.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub protocol: ProtocolSpec,
    pub hardware: HardwareConfig,
    pub source: PhotonSource,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioPreset {
    pub name: String,
    #[serde(flatten)]
    pub scenario: Scenario,
    pub provenance: String,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        let errors = self.field_errors();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errors))
        }
    }

    pub fn field_errors(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        self.source.validate("source", &mut errors);
        self.hardware.validate("hardware", &mut errors);
        self.protocol
            .validate("protocol", self.source.mean_photons, &mut errors);

        let kind = self.source.kind;
        let heralded = self.source.herald_efficiency.is_some();
        let source_ok = match self.protocol.kind {
            ProtocolKind::Bb84 | ProtocolKind::Sarg04 => {
                matches!(kind, SourceKind::Poisson | SourceKind::SinglePhoton | SourceKind::Thermal)
            }
            ProtocolKind::Bb84DecoyActive => kind == SourceKind::Poisson,
            ProtocolKind::Bb84DecoyPassive => kind == SourceKind::HeraldedPdc && heralded,
            ProtocolKind::EntangledPdc => {
                kind == SourceKind::Thermal || (kind == SourceKind::HeraldedPdc && !heralded)
            }
        };
        if !source_ok {
            errors.push(FieldError::new(
                "source.kind",
                format!("{kind:?} source cannot drive {}", self.protocol.kind.name()),
            ));
        }
        if self.protocol.kind == ProtocolKind::EntangledPdc && self.protocol.two_way_steps > 0 {
            errors.push(FieldError::new(
                "protocol.two_way_steps",
                "two-way steps are not available for the entangled bound",
            ));
        }
        errors
    }

    pub fn with_length(&self, length_km: f64) -> Self {
        let mut s = self.clone();
        s.hardware.channel.length_km = length_km;
        s
    }

    /// Switch protocol, adjusting the fields that only make sense for some
    /// protocols (decoy list, SARG04 sifting factor).
    pub fn with_protocol(&self, kind: ProtocolKind) -> Self {
        let mut s = self.clone();
        let old = s.protocol.kind;
        s.protocol.kind = kind;
        if kind == ProtocolKind::Bb84DecoyActive {
            if s.protocol.decoy_means.is_empty() {
                s.protocol.decoy_means = DEFAULT_DECOYS.to_vec();
            }
        } else {
            s.protocol.decoy_means.clear();
        }
        if kind == ProtocolKind::Sarg04 && old != ProtocolKind::Sarg04 {
            s.protocol.sifting_q = 0.25;
        } else if old == ProtocolKind::Sarg04 && kind != ProtocolKind::Sarg04 {
            s.protocol.sifting_q = 1.0;
        }
        if kind == ProtocolKind::EntangledPdc {
            s.protocol.two_way_steps = 0;
        }
        s
    }

    /// Rate at the configured length. Evaluation failures are recorded as a
    /// zero-rate point with a `degenerate` note.
    pub fn evaluate(&self) -> RatePoint {
        let length_km = self.hardware.channel.length_km;
        match self.try_evaluate() {
            Ok(p) => p,
            Err(e) => RatePoint {
                length_km,
                secret_rate: 0.0,
                bits_per_second: 0.0,
                parts: Default::default(),
                degenerate: Some(e.to_string()),
            },
        }
    }

    fn try_evaluate(&self) -> Result<RatePoint> {
        let p = &self.protocol;
        let (q, f) = (p.sifting_q, p.ec_efficiency);
        let (rate, parts) = match p.kind {
            ProtocolKind::EntangledPdc => {
                let (a, b) = self.hardware.split_symmetric();
                let lq = entangled_link_quantities(&self.source, &a, &b)?;
                rate_entangled_parts(q, &lq, f)
            }
            _ => {
                let (lq, omega, e1) = self.single_photon_inputs()?;
                if p.two_way_steps > 0 {
                    let tw = TwoWayTransform::halving(p.two_way_steps);
                    rate_two_way_parts(q, &lq, f, omega, e1, &tw)
                } else {
                    rate_one_way_parts(q, &lq, f, omega, e1)
                }
            }
        };
        Ok(RatePoint {
            length_km: self.hardware.channel.length_km,
            secret_rate: rate,
            bits_per_second: bits_per_second(rate, self.source.effective_rep_rate()?),
            parts,
            degenerate: None,
        })
    }

    /// Link quantities plus the `(Omega, e1)` pair the one-way bound uses.
    fn single_photon_inputs(&self) -> Result<(LinkQuantities, f64, f64)> {
        let hw = &self.hardware;
        match self.protocol.kind {
            ProtocolKind::Bb84 => {
                let lq = link_quantities(&self.source, hw)?;
                let dist = self.source.distribution(DEFAULT_N_MAX)?;
                // every multi-photon pulse is assumed to be detected and insecure
                let multi = (1.0 - dist.get(0) - dist.get(1)).max(0.0);
                let omega = ((lq.gain - multi) / lq.gain).clamp(0.0, 1.0);
                let e1 = if omega > 0.0 {
                    (lq.qber / omega).min(BACKGROUND_ERROR)
                } else {
                    BACKGROUND_ERROR
                };
                Ok((lq, omega, e1))
            }
            ProtocolKind::Bb84DecoyActive => {
                let mut intensities = vec![self.source.mean_photons];
                intensities.extend_from_slice(&self.protocol.decoy_means);
                let obs = modeled_observations(&intensities, hw, self.source.rep_rate)?;
                let est = estimate_from_decoys(&obs[0], &obs[1..], hw.detector.dark_prob)?;
                let lq = link_quantities(&self.source, hw)?;
                Ok((lq, est.omega_lower, est.e1_upper))
            }
            ProtocolKind::Bb84DecoyPassive => {
                let lq = link_quantities(&self.source, hw)?;
                let (omega, e1) = (lq.omega, lq.single_error);
                Ok((lq, omega, e1))
            }
            ProtocolKind::Sarg04 => {
                let lq = sarg04_link_quantities(&self.source, hw)?;
                let (omega, e1) = (lq.omega, lq.single_error);
                Ok((lq, omega, e1))
            }
            ProtocolKind::EntangledPdc => unreachable!("entangled rate has no single-photon inputs"),
        }
    }
}

/// SARG04 link quantities with errors counted over conclusive events.
///
/// For a signal click in the matching basis, a misalignment flip `m` turns a
/// would-be inconclusive outcome into a wrong conclusive one, so signal clicks
/// are conclusive with probability `(1 + 2m) / 4` and wrong with `m / 2`.
/// Background clicks are conclusive half the time and then random.
pub fn sarg04_link_quantities(source: &PhotonSource, hw: &HardwareConfig) -> Result<LinkQuantities> {
    let mut lq = link_quantities(source, hw)?;
    let y0 = hw.detector.dark_prob;
    let m = hw.detector.misalignment;
    let conclusive = |background: f64, signal: f64| 0.5 * background + 0.25 * (1.0 + 2.0 * m) * signal;
    let wrong = |background: f64, signal: f64| 0.25 * background + 0.5 * m * signal;

    let qc = conclusive(y0, lq.gain - y0);
    let modeled = (wrong(y0, lq.gain - y0) / qc).clamp(0.0, 0.5);
    lq.qber = hw.qber_override.unwrap_or(modeled);

    let eta = system_transmittance(&hw.channel, &hw.detector);
    let y1 = yield_n(hw, 1);
    let s1 = eta * (1.0 - y0);
    lq.single_error = if y1 > 0.0 {
        (wrong(y0, s1) / conclusive(y0, s1)).clamp(0.0, 0.5)
    } else {
        BACKGROUND_ERROR
    };
    Ok(lq)
}

fn standard_hardware(length_km: f64) -> HardwareConfig {
    HardwareConfig::new(
        ChannelSpec::fiber(0.21, length_km),
        DetectorSpec {
            efficiency: 0.045,
            dark_prob: 1.7e-6,
            misalignment: 0.033,
        },
    )
}

fn decoy_protocol(decoys: &[f64], f: f64) -> ProtocolSpec {
    ProtocolSpec {
        decoy_means: decoys.to_vec(),
        ec_efficiency: f,
        ..ProtocolSpec::new(ProtocolKind::Bb84DecoyActive)
    }
}

fn gys_hardware() -> HardwareConfig {
    HardwareConfig::new(
        ChannelSpec::fiber(0.21, 20.0),
        DetectorSpec {
            efficiency: 0.045,
            dark_prob: 8e-7,
            misalignment: 0.03,
        },
    )
}

fn preset_table() -> Vec<ScenarioPreset> {
    let entry = |name: &str, protocol, hardware, source, provenance: &str| ScenarioPreset {
        name: name.to_string(),
        scenario: Scenario {
            protocol,
            hardware,
            source,
        },
        provenance: provenance.to_string(),
    };
    let fiber = |alpha: f64, length: f64, eta: f64, dark: f64, e: f64| {
        HardwareConfig::new(
            ChannelSpec::fiber(alpha, length),
            DetectorSpec {
                efficiency: eta,
                dark_prob: dark,
                misalignment: e,
            },
        )
    };
    let rep = DEFAULT_REP_RATE;
    let f = DEFAULT_EC_EFFICIENCY;
    let std_filled = "rep_rate 1 MHz and length from the standard preset";

    vec![
        entry(
            "standard",
            decoy_protocol(&DEFAULT_DECOYS, 1.0),
            standard_hardware(50.0),
            PhotonSource::poisson(0.48, rep),
            "standard parameters of the secure-distance comparison figure: p_dark 1.7e-6, \
             alpha 0.21 dB/km, e_det 3.3e-2, eta_det 4.5e-2, q 1; chosen here: f 1.0, \
             signal 0.48, decoys vacuum + 0.05, length 50 km, rep_rate 1 MHz",
        ),
        entry(
            "gys",
            decoy_protocol(&DEFAULT_DECOYS, f),
            gys_hardware(),
            PhotonSource::poisson(0.48, rep),
            "Gobby, Yuan, Shields 2004 (Table 1): alpha 0.21 dB/km, eta_det 4.5%, e_det 3%, \
             p_dark 8e-7, phase encoding; chosen here: decoy BB84 with signal 0.48, decoys \
             vacuum + 0.05, length 20 km, rep_rate 1 MHz",
        ),
        entry(
            "gys-sarg04",
            ProtocolSpec {
                ec_efficiency: f,
                ..ProtocolSpec::new(ProtocolKind::Sarg04)
            },
            gys_hardware(),
            PhotonSource::poisson(0.48, rep),
            "gys hardware running SARG04 with q 0.25 at signal 0.48",
        ),
        entry(
            "gys-entangled",
            ProtocolSpec {
                ec_efficiency: f,
                ..ProtocolSpec::new(ProtocolKind::EntangledPdc)
            },
            gys_hardware(),
            PhotonSource::pdc(0.05, rep, None),
            "gys hardware on both arms of a midway thermal pair source with mean pair \
             number 0.05",
        ),
        entry(
            "satellite",
            decoy_protocol(&DEFAULT_DECOYS, f),
            HardwareConfig::new(
                ChannelSpec::fixed_loss(35.0),
                DetectorSpec {
                    efficiency: 0.10,
                    dark_prob: 1.7e-6,
                    misalignment: 0.03,
                },
            ),
            PhotonSource::poisson(0.27, rep),
            "ground to geostationary link, 35 dB total loss; eta_det 10%, e_det 3%, signal \
             0.27 from Schmitt-Manderbach 2007; p_dark from standard; decoys vacuum + 0.05",
        ),
        entry(
            "freespace-144km",
            decoy_protocol(&DEFAULT_DECOYS, f),
            fiber(24.0 / 144.0, 144.0, 0.10, 1.7e-6, 0.03),
            PhotonSource::poisson(0.27, rep),
            "Schmitt-Manderbach 2007 (Table 1): 24 dB over 144 km, eta_det 10%, e_det 3%, \
             signal 0.27; p_dark unspecified, filled from standard; reported decoy 0.39 \
             exceeds the signal and is replaced by 0.05 (vacuum kept); rep_rate 1 MHz",
        ),
        entry(
            "radio-link",
            decoy_protocol(&DEFAULT_DECOYS, f),
            fiber(20.0, 1.0, 0.10, 1.7e-6, 0.03),
            PhotonSource::poisson(0.48, rep),
            "800 nm free-space link between buildings in bad weather, alpha 20 dB/km \
             (sweep alpha over 0.2..20); detector eta_det 10%, e_det 3% as in the 144 km \
             free-space row; p_dark, signal, decoys from standard; length 1 km",
        ),
        entry(
            "dynes2007",
            decoy_protocol(&[0.0, 0.098], f),
            fiber(0.21, 20.0, 0.0562, 1.4e-4, 0.033),
            PhotonSource::poisson(0.55, rep),
            &format!(
                "Dynes 2007 (Table 1): signal 0.55, decoys vacuum + 0.098, eta_det 5.62%, \
                 p_dark 1.4e-4; alpha and e_det unspecified, filled from standard; {std_filled}"
            ),
        ),
        entry(
            "peng2007",
            decoy_protocol(&[0.0, 0.2], f),
            fiber(0.2, 20.0, 0.045, 6.7e-6, 0.033),
            PhotonSource::poisson(0.6, rep),
            &format!(
                "Peng 2007 (Table 1): signal 0.6, decoys vacuum + 0.2, alpha 0.2 dB/km, \
                 p_dark 6.7e-6 (low end of 6.7e-6..9.2e-6); eta_det and e_det unspecified, \
                 filled from standard; {std_filled}"
            ),
        ),
        entry(
            "yin2007",
            decoy_protocol(&[0.2], f),
            fiber(0.21, 20.0, 0.045, 5e-7, 0.033),
            PhotonSource::poisson(0.6, rep),
            &format!(
                "Yin 2007 (Table 1): signal 0.6, decoy 0.2 (no vacuum, background taken \
                 from p_dark), p_dark 5e-7, phase encoding; alpha, eta_det, e_det \
                 unspecified, filled from standard; {std_filled}"
            ),
        ),
        entry(
            "yuan2007",
            decoy_protocol(&[0.204], f),
            fiber(4.7 / 25.3, 25.3, 0.056, 9.4e-5, 0.033),
            PhotonSource::poisson(0.425, rep),
            "Yuan 2007 (Table 1): signal 0.425, decoy 0.204 (no vacuum), 4.7 dB over \
             25.3 km, eta_det 5.6%, p_dark 9.4e-5; e_det unspecified, filled from standard; \
             rep_rate 1 MHz",
        ),
        entry(
            "resch2005",
            ProtocolSpec {
                ec_efficiency: f,
                ..ProtocolSpec::new(ProtocolKind::EntangledPdc)
            },
            fiber(-10.0 * 0.014f64.log10() / 7.8, 7.8, 0.15, 1.7e-6, 0.033),
            PhotonSource::pdc(0.05, rep, None),
            "Resch 2005 (Table 1): entangled, 810 nm, 1.4% transmission over 7.8 km, \
             eta_det 15%; p_dark reported as 800/s without a gate width, filled from \
             standard together with e_det; mean pair number 0.05; rep_rate 1 MHz",
        ),
        entry(
            "passive-mixed-wavelength",
            ProtocolSpec {
                ec_efficiency: f,
                ..ProtocolSpec::new(ProtocolKind::Bb84DecoyPassive)
            },
            standard_hardware(50.0),
            PhotonSource::pdc(0.05, 20e6, Some(0.7)),
            "1550 nm signal, 800 nm idler into a TMD with 70% efficiency, 20 MHz pump; \
             receiver hardware from standard; mean pair number 0.05",
        ),
        entry(
            "passive-single-wavelength",
            ProtocolSpec {
                ec_efficiency: f,
                ..ProtocolSpec::new(ProtocolKind::Bb84DecoyPassive)
            },
            standard_hardware(50.0),
            PhotonSource::pdc(0.05, 20e6, Some(0.045)),
            "both photons at 1550 nm, idler TMD at 4.5% efficiency, 20 MHz pump; \
             receiver hardware from standard; mean pair number 0.05",
        ),
    ]
}

pub fn presets() -> Vec<ScenarioPreset> {
    preset_table()
}

pub fn preset(name: &str) -> Result<ScenarioPreset> {
    let table = preset_table();
    let names: Vec<String> = table.iter().map(|p| p.name.clone()).collect();
    table
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: names.join(", "),
        })
}

fn alias(key: &str) -> String {
    let path = match key {
        "length" | "length_km" | "L" => "hardware.channel.length_km",
        "alpha" | "attenuation" => "hardware.channel.attenuation_db_per_km",
        "fixed_loss" | "fixed_loss_db" => "hardware.channel.fixed_loss_db",
        "eta_det" | "efficiency" => "hardware.detector.efficiency",
        "p_dark" | "dark_prob" => "hardware.detector.dark_prob",
        "e_det" | "misalignment" => "hardware.detector.misalignment",
        "qber" | "qber_override" => "hardware.qber_override",
        "mu" | "mean_photons" => "source.mean_photons",
        "rep_rate" => "source.rep_rate",
        "herald" | "herald_efficiency" => "source.herald_efficiency",
        "q" | "sifting_q" => "protocol.sifting_q",
        "f" | "ec_efficiency" => "protocol.ec_efficiency",
        "decoys" | "decoy_means" => "protocol.decoy_means",
        "two_way_steps" => "protocol.two_way_steps",
        other if other.starts_with("channel.") || other.starts_with("detector.") => {
            return format!("hardware.{other}");
        }
        other => other,
    };
    path.to_string()
}

fn parse_value(raw: &str) -> Value {
    if let Ok(v) = serde_json::from_str::<Value>(raw) {
        return v;
    }
    let list: Option<Vec<Value>> = raw
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok().map(Value::from))
        .collect();
    match list {
        Some(items) if raw.contains(',') => Value::Array(items),
        _ => Value::String(raw.to_string()),
    }
}

fn lookup<'a>(root: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(root, |v, k| v.get(k))
}

/// Set one field by dotted path (or short alias such as `p_dark`).
pub fn apply_override(scenario: &Scenario, key: &str, raw_value: &str) -> Result<Scenario> {
    set_field(scenario, key, parse_value(raw_value))
}

fn set_field(scenario: &Scenario, key: &str, value: Value) -> Result<Scenario> {
    let path = alias(key);
    let field_err = |msg: String| Error::Validation(vec![FieldError::new(path.clone(), msg)]);
    let mut root = serde_json::to_value(scenario).expect("scenario serializes");
    let (parent, leaf) = match path.rsplit_once('.') {
        Some((p, l)) => (p, l),
        None => return Err(field_err("unknown field".into())),
    };
    let slot = parent
        .split('.')
        .try_fold(&mut root, |v, k| v.get_mut(k))
        .and_then(Value::as_object_mut)
        .ok_or_else(|| field_err("unknown field".into()))?;
    slot.insert(leaf.to_string(), value.clone());
    let updated: Scenario =
        serde_json::from_value(root).map_err(|e| field_err(format!("invalid value: {e}")))?;
    // unknown keys are dropped by deserialization; catch them here
    let check = serde_json::to_value(&updated).expect("scenario serializes");
    if lookup(&check, &path).is_none() && !value.is_null() {
        return Err(field_err("unknown field".into()));
    }
    Ok(updated)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    Length,
    EDet,
    EtaDet,
    PDark,
    Alpha,
    MeanPhotons,
}

impl SweepVariable {
    pub fn field_path(self) -> &'static str {
        match self {
            SweepVariable::Length => "hardware.channel.length_km",
            SweepVariable::EDet => "hardware.detector.misalignment",
            SweepVariable::EtaDet => "hardware.detector.efficiency",
            SweepVariable::PDark => "hardware.detector.dark_prob",
            SweepVariable::Alpha => "hardware.channel.attenuation_db_per_km",
            SweepVariable::MeanPhotons => "source.mean_photons",
        }
    }

    pub fn apply(self, scenario: &Scenario, x: f64) -> Scenario {
        let mut s = scenario.clone();
        match self {
            SweepVariable::Length => s.hardware.channel.length_km = x,
            SweepVariable::EDet => s.hardware.detector.misalignment = x,
            SweepVariable::EtaDet => s.hardware.detector.efficiency = x,
            SweepVariable::PDark => s.hardware.detector.dark_prob = x,
            SweepVariable::Alpha => s.hardware.channel.attenuation_db_per_km = x,
            SweepVariable::MeanPhotons => s.source.mean_photons = x,
        }
        s
    }
}

impl std::str::FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(Value::String(s.replace('-', "_")))
            .map_err(|_| Error::Domain(format!("unknown sweep variable '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
}

impl SweepSpec {
    pub fn new(variable: SweepVariable, grid: Vec<f64>) -> Self {
        Self { variable, grid }
    }

    /// `lo:hi:n`, `n` evenly spaced values including both ends.
    pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
        let bad = || Error::Domain(format!("grid '{text}' is not lo:hi:n"));
        let parts: Vec<&str> = text.split(':').collect();
        let [lo, hi, n] = parts.as_slice() else {
            return Err(bad());
        };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        Ok(match n {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect(),
        })
    }

    pub fn field_errors(&self, baseline: &Scenario) -> Vec<FieldError> {
        let mut errors = Vec::new();
        if self.grid.is_empty() {
            errors.push(FieldError::new("sweep.grid", "must contain at least one value"));
        }
        if self.grid.len() > MAX_GRID_POINTS {
            errors.push(FieldError::new(
                "sweep.grid",
                format!("at most {MAX_GRID_POINTS} points"),
            ));
        }
        if self.grid.windows(2).any(|w| !(w[0] < w[1])) {
            errors.push(FieldError::new("sweep.grid", "must be strictly increasing"));
        }
        if !errors.is_empty() {
            return errors;
        }
        for (i, &x) in self.grid.iter().enumerate() {
            for e in self.variable.apply(baseline, x).field_errors() {
                errors.push(FieldError::new(
                    format!("sweep.grid[{i}]"),
                    format!("{}: {}", e.field, e.message),
                ));
            }
        }
        errors
    }
}

/// One rate point per grid value, in grid order.
pub fn sweep(baseline: &Scenario, spec: &SweepSpec) -> Result<Vec<RatePoint>> {
    let mut errors = baseline.field_errors();
    if errors.is_empty() {
        errors = spec.field_errors(baseline);
    }
    if !errors.is_empty() {
        return Err(Error::Validation(errors));
    }
    Ok(spec
        .grid
        .iter()
        .map(|&x| spec.variable.apply(baseline, x).evaluate())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub mean_photons: f64,
    pub point: RatePoint,
}

fn rate_at_mean(scenario: &Scenario, mean: f64) -> f64 {
    let mut s = scenario.clone();
    s.source.mean_photons = mean;
    if s.validate().is_err() {
        return 0.0;
    }
    s.evaluate().secret_rate
}

/// Mean photon number maximizing the rate at `length_km`.
pub fn optimize_mean_photons(scenario: &Scenario, length_km: f64) -> Result<Optimum> {
    let s = scenario.with_length(length_km);
    s.validate()?;
    if s.source.kind != SourceKind::Poisson {
        return Err(Error::Validation(vec![FieldError::new(
            "source.kind",
            "intensity optimization needs a poisson source",
        )]));
    }
    let (lo, hi) = MEAN_PHOTON_RANGE;
    let (mean, _) = maximize_scalar(|m| rate_at_mean(&s, m), lo, hi, 1e-6)?;
    let mut best = s;
    best.source.mean_photons = mean;
    Ok(Optimum {
        mean_photons: mean,
        point: best.evaluate(),
    })
}

/// Largest length at which the rate stays above `floor`.
pub fn max_secure_distance(scenario: &Scenario, floor: f64) -> Result<f64> {
    scenario.validate()?;
    if !(floor > 0.0 && floor.is_finite()) {
        return Err(Error::Validation(vec![FieldError::new("floor", "must be > 0")]));
    }
    if scenario.hardware.channel.fixed_loss_db.is_some() {
        return Err(Error::Domain(
            "channel has a fixed loss; the rate does not depend on length".into(),
        ));
    }
    let margin = |l: f64| scenario.with_length(l).evaluate().secret_rate - floor;
    let at_zero = margin(0.0);
    if at_zero <= 0.0 {
        return Err(Error::NeverSecure {
            rate: at_zero + floor,
            floor,
        });
    }
    if margin(MAX_DISTANCE_KM) > 0.0 {
        return Err(Error::Domain(format!(
            "still secure at the search limit of {MAX_DISTANCE_KM} km"
        )));
    }
    bisect_root(margin, 0.0, MAX_DISTANCE_KM, 1e-6)
}

/// Channel loss at the zero-rate boundary. The floor is the smallest
/// positive double, so this is where the bound itself vanishes.
pub fn tolerable_loss_db(scenario: &Scenario) -> Result<f64> {
    let d = max_secure_distance(scenario, f64::MIN_POSITIVE)?;
    Ok(d * scenario.hardware.channel.attenuation_db_per_km)
}

pub fn write_curve_csv<W: Write>(points: &[RatePoint], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for p in points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.length_km,
            p.secret_rate,
            p.bits_per_second,
            p.parts.gain,
            p.parts.qber,
            p.parts.omega,
            p.parts.e1
        )?;
    }
    Ok(())
}
