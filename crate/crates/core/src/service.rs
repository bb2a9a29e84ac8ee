//! JSON documents shared by the CLI and the HTTP service, the pure handlers
//! that produce them, and the axum router around those handlers.

use std::net::SocketAddr;

use axum::body::Bytes;
use axum::http::{HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

use crate::error::{Error, FieldError, Result};
use crate::hardware::{HardwareConfig, PhotonSource, SourceKind};
use crate::rates::RatePoint;
use crate::scenarios::{
    max_secure_distance, optimize_mean_photons, presets, sweep, Scenario,
    ScenarioPreset, SweepSpec, SweepVariable, DEFAULT_RATE_FLOOR,
};
use crate::sim::{
    pns_detection_demo, simulate_counts, AttackKind, AttackSpec, PnsReport, StageCounts,
    StageProtocol,
};

/// Longest simulation accepted through the API.
pub const MAX_SIM_PULSES: u64 = 10_000_000;
pub const DEFAULT_SIM_PULSES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRequest {
    #[serde(flatten)]
    pub scenario: Scenario,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeRequest {
    #[serde(flatten)]
    pub scenario: Scenario,
    #[serde(default)]
    pub length_km: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxDistanceRequest {
    #[serde(flatten)]
    pub scenario: Scenario,
    #[serde(default)]
    pub floor: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulateRequest {
    pub hardware: HardwareConfig,
    pub source: PhotonSource,
    #[serde(default = "default_stage")]
    pub stage: StageProtocol,
    #[serde(default = "default_attack")]
    pub attack: AttackSpec,
    /// Decoy intensities for the photon-number-splitting demonstration.
    #[serde(default)]
    pub decoys: Vec<f64>,
    #[serde(default)]
    pub n_pulses: Option<u64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_stage() -> StageProtocol {
    StageProtocol::Bb84
}

fn default_attack() -> AttackSpec {
    AttackSpec::NONE
}

/// One curve point with the CSV column names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub length_km: f64,
    pub secret_rate_bits_per_pulse: f64,
    pub bits_per_second: f64,
    #[serde(rename = "Q")]
    pub gain: f64,
    #[serde(rename = "E")]
    pub qber: f64,
    pub omega: f64,
    pub e1: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degenerate: Option<String>,
}

impl From<&RatePoint> for CurvePoint {
    fn from(p: &RatePoint) -> Self {
        Self {
            length_km: p.length_km,
            secret_rate_bits_per_pulse: p.secret_rate,
            bits_per_second: p.bits_per_second,
            gain: p.parts.gain,
            qber: p.parts.qber,
            omega: p.parts.omega,
            e1: p.parts.e1,
            degenerate: p.degenerate.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveDocument {
    /// The resolved request.
    pub meta: RateRequest,
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimumDocument {
    pub meta: OptimizeRequest,
    pub mean_photons: f64,
    pub point: CurvePoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceDocument {
    pub meta: MaxDistanceRequest,
    pub max_distance_km: f64,
    pub tolerable_loss_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub meta: SimulateRequest,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<StageCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gain: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qber: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sift_fraction: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pns: Option<PnsReport>,
}

pub fn preset_list() -> Vec<ScenarioPreset> {
    presets()
}

/// Rate curve for a request; without a sweep, the single configured point.
pub fn rate_curve(req: &RateRequest) -> Result<CurveDocument> {
    let spec = req.sweep.clone().unwrap_or_else(|| {
        SweepSpec::new(
            SweepVariable::Length,
            vec![req.scenario.hardware.channel.length_km],
        )
    });
    let points = sweep(&req.scenario, &spec)?;
    Ok(CurveDocument {
        meta: req.clone(),
        points: points.iter().map(CurvePoint::from).collect(),
    })
}

pub fn optimize(req: &OptimizeRequest) -> Result<OptimumDocument> {
    let Some(length) = req.length_km else {
        return Err(Error::Validation(vec![FieldError::new("length_km", "is required")]));
    };
    if !(length >= 0.0 && length.is_finite()) {
        return Err(Error::Validation(vec![FieldError::new("length_km", "must be >= 0")]));
    }
    let opt = optimize_mean_photons(&req.scenario, length)?;
    Ok(OptimumDocument {
        meta: req.clone(),
        mean_photons: opt.mean_photons,
        point: CurvePoint::from(&opt.point),
    })
}

pub fn max_distance(req: &MaxDistanceRequest) -> Result<DistanceDocument> {
    let floor = req.floor.unwrap_or(DEFAULT_RATE_FLOOR);
    let d = max_secure_distance(&req.scenario, floor)?;
    let loss = d * req.scenario.hardware.channel.attenuation_db_per_km;
    Ok(DistanceDocument {
        meta: MaxDistanceRequest {
            scenario: req.scenario.clone(),
            floor: Some(floor),
        },
        max_distance_km: d,
        tolerable_loss_db: loss,
    })
}

pub fn simulate(req: &SimulateRequest) -> Result<SimulationDocument> {
    let mut errors = Vec::new();
    req.source.validate("source", &mut errors);
    req.hardware.validate("hardware", &mut errors);
    let n = req.n_pulses.unwrap_or(DEFAULT_SIM_PULSES);
    if n == 0 || n > MAX_SIM_PULSES {
        errors.push(FieldError::new(
            "n_pulses",
            format!("must be in [1, {MAX_SIM_PULSES}]"),
        ));
    }
    if !(0.0..=1.0).contains(&req.attack.fraction) {
        errors.push(FieldError::new("attack.fraction", "must be in [0, 1]"));
    }
    if req.attack.kind == AttackKind::PhotonNumberSplitting {
        if req.source.kind != SourceKind::Poisson {
            errors.push(FieldError::new("source.kind", "the PNS demonstration needs a poisson source"));
        }
        if req.decoys.is_empty() {
            errors.push(FieldError::new("decoys", "the PNS demonstration needs decoy intensities"));
        }
    }
    for (i, d) in req.decoys.iter().enumerate() {
        if !(*d >= 0.0 && d.is_finite()) {
            errors.push(FieldError::new(format!("decoys[{i}]"), "must be >= 0"));
        }
    }
    if !errors.is_empty() {
        return Err(Error::Validation(errors));
    }
    let mut doc = SimulationDocument {
        meta: SimulateRequest {
            n_pulses: Some(n),
            ..req.clone()
        },
        counts: None,
        gain: None,
        qber: None,
        sift_fraction: None,
        pns: None,
    };
    if req.attack.kind == AttackKind::PhotonNumberSplitting {
        doc.pns = Some(pns_detection_demo(
            n as usize,
            &req.hardware,
            &req.source,
            &req.decoys,
            AttackKind::PhotonNumberSplitting,
            req.seed,
        )?);
    } else {
        let c = simulate_counts(req.stage, n as usize, &req.hardware, &req.source, &req.attack, req.seed)?;
        doc.gain = Some(c.gain());
        doc.qber = Some(c.qber());
        doc.sift_fraction = Some(c.sift_fraction());
        doc.counts = Some(c);
    }
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fields: Vec<FieldError>,
}

pub struct ApiError(pub Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

pub fn status_for(e: &Error) -> StatusCode {
    match e {
        Error::Validation(_) => StatusCode::BAD_REQUEST,
        Error::UnknownPreset { .. } => StatusCode::NOT_FOUND,
        _ => StatusCode::UNPROCESSABLE_ENTITY,
    }
}

pub fn error_body(e: &Error) -> ErrorBody {
    let (kind, fields) = match e {
        Error::Validation(f) => ("validation", f.clone()),
        Error::NeverSecure { .. } => ("never_secure", Vec::new()),
        Error::UnknownPreset { .. } => ("unknown_preset", Vec::new()),
        _ => ("computation", Vec::new()),
    };
    ErrorBody {
        error: kind.to_string(),
        message: e.to_string(),
        fields,
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (status_for(&self.0), Json(error_body(&self.0))).into_response()
    }
}

fn parse_body<T: DeserializeOwned>(body: &[u8]) -> Result<T> {
    serde_json::from_slice(body)
        .map_err(|e| Error::Validation(vec![FieldError::new("body", e.to_string())]))
}

/// Serialize to the exact bytes the CLI prints for the same document.
pub fn to_json_bytes<T: Serialize>(value: &T) -> Vec<u8> {
    serde_json::to_vec(value).expect("documents serialize")
}

fn json_response<T: Serialize>(value: &T) -> Response {
    (
        [(axum::http::header::CONTENT_TYPE, HeaderValue::from_static("application/json"))],
        to_json_bytes(value),
    )
        .into_response()
}

/// Run a CPU-bound handler off the async worker threads.
async fn compute<Req, Doc, F>(body: Bytes, f: F) -> Result<Response, ApiError>
where
    Req: DeserializeOwned + Send + 'static,
    Doc: Serialize + Send + 'static,
    F: FnOnce(&Req) -> Result<Doc> + Send + 'static,
{
    let req: Req = parse_body(&body)?;
    let doc = tokio::task::spawn_blocking(move || f(&req))
        .await
        .map_err(|e| Error::Domain(format!("worker failed: {e}")))??;
    Ok(json_response(&doc))
}

#[derive(Debug, Clone, Default)]
pub struct ServiceConfig {
    /// Origin allowed for cross-origin requests; `*` allows any.
    pub allow_origin: Option<String>,
}

pub fn router(config: &ServiceConfig) -> Router {
    let app = Router::new()
        .route("/api/presets", get(|| async { json_response(&preset_list()) }))
        .route(
            "/api/rate-curve",
            post(|body: Bytes| compute(body, rate_curve)),
        )
        .route(
            "/api/optimize",
            post(|body: Bytes| compute(body, optimize)),
        )
        .route(
            "/api/max-distance",
            post(|body: Bytes| compute(body, max_distance)),
        )
        .route(
            "/api/simulate",
            post(|body: Bytes| compute(body, simulate)),
        )
;
    match config.allow_origin.as_deref() {
        None => app,
        Some("*") => app.layer(CorsLayer::new().allow_origin(Any).allow_headers(Any).allow_methods(Any)),
        Some(origin) => match HeaderValue::from_str(origin) {
            Ok(v) => app.layer(
                CorsLayer::new()
                    .allow_origin(AllowOrigin::exact(v))
                    .allow_headers(Any)
                    .allow_methods(Any),
            ),
            Err(_) => app,
        },
    }
}

pub async fn serve(addr: SocketAddr, config: ServiceConfig) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(&config))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::preset;

    fn request(name: &str) -> RateRequest {
        RateRequest {
            scenario: preset(name).unwrap().scenario,
            sweep: None,
        }
    }

    #[test]
    fn rate_request_round_trips() {
        let mut r = request("standard");
        r.sweep = Some(SweepSpec::new(SweepVariable::PDark, vec![1e-7, 1e-6]));
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<RateRequest>(&text).unwrap(), r);
    }

    #[test]
    fn single_point_without_sweep() {
        let doc = rate_curve(&request("gys")).unwrap();
        assert_eq!(doc.points.len(), 1);
        assert_eq!(doc.points[0].length_km, 20.0);
        let v: serde_json::Value = serde_json::from_slice(&to_json_bytes(&doc)).unwrap();
        for key in ["length_km", "secret_rate_bits_per_pulse", "bits_per_second", "Q", "E", "omega", "e1"] {
            assert!(v["points"][0].get(key).is_some(), "{key}");
        }
    }

    #[test]
    fn optimize_requires_length() {
        let req = OptimizeRequest {
            scenario: preset("gys").unwrap().scenario,
            length_km: None,
        };
        match optimize(&req) {
            Err(Error::Validation(f)) => assert_eq!(f[0].field, "length_km"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn statuses() {
        assert_eq!(status_for(&Error::Validation(vec![])), StatusCode::BAD_REQUEST);
        assert_eq!(
            status_for(&Error::NeverSecure { rate: 0.0, floor: 1e-9 }),
            StatusCode::UNPROCESSABLE_ENTITY
        );
    }

    #[test]
    fn simulate_validates_pulses() {
        let s = preset("gys").unwrap().scenario;
        let req = SimulateRequest {
            hardware: s.hardware,
            source: s.source,
            stage: StageProtocol::Bb84,
            attack: AttackSpec::NONE,
            decoys: vec![],
            n_pulses: Some(0),
            seed: 1,
        };
        assert!(matches!(simulate(&req), Err(Error::Validation(f)) if f[0].field == "n_pulses"));
    }
}
