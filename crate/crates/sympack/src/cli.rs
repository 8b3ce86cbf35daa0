//! Command implementations behind the `sympack` binary.
//!
//! Each command is a plain function so that integration tests can drive it
//! without spawning a process.  Errors of kind `Parameter`, `Io`, or `Serde`
//! correspond to usage/parse failures (process exit 2); a verification run
//! whose checks fail still writes its report and exits 1.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::Path;

use crate::characteristics::{characteristic_direction, trace_characteristic, HopfDisc};
use crate::embedding::{pullback_defect, DiffMode, Packing, CP2_VOLUME};
use crate::export::{polytope_svg, surface_obj, trace_json};
use crate::obstructions::PackingTable;
use crate::quadric::{fiber_area_profile, full4_packing, quadric_param, regular5_packing};
use crate::report::{f64_17, CheckRecord, VerificationReport};
use crate::sampling::{self, SampleCloud};
use crate::surfaces::{
    assemble_surfaces, build_circle_graph, detect_shared_arcs, dream_certificate, reduce_graph,
    two_ball_sphere, Color,
};
use crate::toric::{full1_packing, karshon_packing, karshon_triangles, KarshonSpec, MomentTriangle};
use crate::{Error, Result, FD_STEP, TOL_ANALYTIC, TOL_FD, TOL_QUAD};

pub const DEFAULT_SEED: u64 = 42;

/// Seed precedence: CLI flag > SYMPACK_SEED environment variable > 42.
pub fn resolve_seed(flag: Option<u64>) -> u64 {
    if let Some(s) = flag {
        return s;
    }
    if let Ok(v) = std::env::var("SYMPACK_SEED") {
        if let Ok(s) = v.parse() {
            return s;
        }
    }
    DEFAULT_SEED
}

// ---------------------------------------------------------------------------
// Packing description files
// ---------------------------------------------------------------------------

/// Optional radius perturbation of one ball (toric examples only), used to
/// exercise the overlap detectors.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Inflation {
    pub ball: usize,
    #[serde(with = "f64_17")]
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BallSummary {
    pub name: String,
    #[serde(with = "f64_17")]
    pub radius: f64,
}

/// A packing description file: construction parameters, not geometry.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PackingSpec {
    pub schema: u32,
    pub example: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inflate: Option<Inflation>,
    pub seed: u64,
    pub balls: Vec<BallSummary>,
}

const EXAMPLES: [&str; 5] = ["karshon2", "karshon3", "full1", "full4", "regular5"];

fn toric_spec(spec: &PackingSpec) -> Result<Option<Vec<MomentTriangle>>> {
    let tris = match spec.example.as_str() {
        "karshon2" => {
            let r1 = spec.r1.unwrap_or(1.0 / f64::sqrt(2.0));
            karshon_triangles(KarshonSpec::TwoBalls { r1 })?
        }
        "karshon3" => karshon_triangles(KarshonSpec::ThreeBalls)?,
        "full1" => vec![MomentTriangle::new(
            [0.0, 0.0],
            [[1, 0], [0, 1]],
            0.5,
        )?],
        _ => return Ok(None),
    };
    Ok(Some(tris))
}

/// Build the packing a description file denotes.
pub fn resolve_packing(spec: &PackingSpec) -> Result<Packing> {
    if spec.schema != 1 {
        return Err(Error::Parameter(format!(
            "unsupported packing schema {}",
            spec.schema
        )));
    }
    let mut p = match spec.example.as_str() {
        "karshon2" => karshon_packing(KarshonSpec::TwoBalls {
            r1: spec.r1.unwrap_or(1.0 / f64::sqrt(2.0)),
        })?,
        "karshon3" => karshon_packing(KarshonSpec::ThreeBalls)?,
        "full1" => full1_packing()?,
        "full4" => full4_packing()?,
        "regular5" => regular5_packing()?,
        other => {
            return Err(Error::Parameter(format!(
                "unknown example '{other}' (expected one of {EXAMPLES:?})"
            )))
        }
    };
    if let Some(inf) = &spec.inflate {
        let mut tris = toric_spec(spec)?.ok_or_else(|| {
            Error::Parameter("radius inflation is only supported for toric examples".into())
        })?;
        let t = tris
            .get(inf.ball)
            .ok_or_else(|| Error::Parameter(format!("no ball {} to inflate", inf.ball)))?;
        let r = t.radius() + inf.delta;
        tris[inf.ball] = MomentTriangle::new(t.vertex, t.a, r * r / 2.0)?;
        let mut balls = Vec::new();
        for tri in &tris {
            balls.push(crate::toric::toric_ball(tri)?);
        }
        let label = format!("{}+inflated{}", p.label, inf.ball);
        let flags = p.construction_flags.clone();
        p = Packing::new(label, balls);
        p.construction_flags = flags;
        p.construction_flags
            .push(format!("ball {} radius inflated by {}", inf.ball, inf.delta));
    }
    Ok(p)
}

fn spec_for(example: &str, r1: Option<f64>, seed: u64) -> Result<PackingSpec> {
    let mut spec = PackingSpec {
        schema: 1,
        example: example.to_string(),
        r1: if example == "karshon2" { r1 } else { None },
        inflate: None,
        seed,
        balls: Vec::new(),
    };
    let p = resolve_packing(&spec)?;
    spec.balls = p
        .balls
        .iter()
        .map(|b| BallSummary {
            name: b.name.clone(),
            radius: b.radius,
        })
        .collect();
    Ok(spec)
}

fn write_out(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)?;
    Ok(())
}

fn load_spec(path: &Path) -> Result<PackingSpec> {
    let text = std::fs::read_to_string(path)?;
    let spec: PackingSpec = serde_json::from_str(&text)?;
    Ok(spec)
}

/// `sympack construct --example ID [--r1 R] --out PATH`
pub fn cmd_construct(example: &str, r1: Option<f64>, seed: u64, out: &Path) -> Result<()> {
    let spec = spec_for(example, r1, seed)?;
    let mut json = serde_json::to_string_pretty(&spec)?;
    json.push('\n');
    write_out(out, &json)
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

/// Expected fill fraction Σ rᵢ⁴ of an example, for the volume gate.
fn expected_fill(p: &Packing) -> f64 {
    p.balls.iter().map(|b| b.radius.powi(4)).sum()
}

fn hopf_alignment_defect(p: &Packing, samples: usize, seed: u64) -> (f64, f64, Vec<f64>) {
    // Max misalignment between the computed characteristic direction and the
    // Hopf field i·x over boundary samples of every analytic ball.
    let mut worst = 0.0f64;
    let mut argmax = vec![0.0; 4];
    let mut count = 0.0;
    for (bi, b) in p.balls.iter().enumerate() {
        if !b.has_jacobian() {
            continue;
        }
        for i in 0..samples as u64 {
            let u = sampling::sphere3(seed.wrapping_add(bi as u64), i);
            let x = [
                u[0] * b.radius,
                u[1] * b.radius,
                u[2] * b.radius,
                u[3] * b.radius,
            ];
            if b.clearance(&x) < 1e-3 {
                continue;
            }
            let Ok(dir) = characteristic_direction(b, &x) else {
                continue;
            };
            let hopf = [-x[1], x[0], -x[3], x[2]];
            let nd: f64 = dir.domain.iter().map(|v| v * v).sum::<f64>().sqrt();
            let nh: f64 = hopf.iter().map(|v| v * v).sum::<f64>().sqrt();
            let dot: f64 = dir
                .domain
                .iter()
                .zip(hopf.iter())
                .map(|(a, b)| a * b)
                .sum::<f64>()
                / (nd * nh);
            let defect = (1.0 - dot.abs()).abs();
            count += 1.0;
            if defect > worst {
                worst = defect;
                argmax = x.to_vec();
            }
        }
    }
    (worst, count, argmax)
}

/// `sympack verify --packing P [--samples N] [--seed S] [--report OUT]`.
/// Returns the report and the process exit code (0 pass, 1 check failure).
pub fn cmd_verify(
    packing: &Path,
    samples: usize,
    seed: u64,
    report_path: Option<&Path>,
) -> Result<(VerificationReport, i32)> {
    if samples == 0 {
        return Err(Error::Parameter("samples must be positive".into()));
    }
    let spec = load_spec(packing)?;
    let p = resolve_packing(&spec)?;
    let mut report =
        VerificationReport::new(p.label.clone(), seed, p.construction_flags.clone());

    // Pullback defect per ball: analytic when a Jacobian is available,
    // otherwise finite differences with the quadrature-grade gate.
    for (i, b) in p.balls.iter().enumerate() {
        let (mode, h, tol, n) = if b.has_jacobian() {
            (DiffMode::Analytic, FD_STEP, TOL_ANALYTIC, samples)
        } else {
            (DiffMode::FiniteDifference, 2e-6, TOL_QUAD, samples.min(2000))
        };
        let cloud = SampleCloud::ball(seed, n, b.radius, 1e-3);
        let name = format!("pullback_defect/ball{i}");
        let detail = b.name.clone();
        report.run(|| match pullback_defect(b, &cloud, mode, h) {
            Ok(d) => {
                let mut rec = CheckRecord::new(&name, d.max_abs, tol)
                    .with_samples(d.samples as u64, seed)
                    .with_detail(&detail);
                if rec.status == crate::report::CheckStatus::Fail {
                    rec = rec.with_argmax(cloud.points[d.argmax_sample].to_vec());
                }
                rec
            }
            Err(e) => CheckRecord::new(&name, f64::INFINITY, tol)
                .with_argmax(vec![])
                .with_detail(format!("{detail}: {e}")),
        });
    }

    // Pairwise interior disjointness.
    let per_ball = (samples / p.balls.len()).max(1000);
    report.run(|| {
        let v = p.disjointness_violations(per_ball, seed);
        let mut rec = CheckRecord::new("disjointness_violations", v as f64, 0.0)
            .with_samples((per_ball * p.balls.len()) as u64, seed);
        if v > 0 {
            rec = rec.with_argmax(vec![v as f64]);
        }
        rec
    });

    // Monte-Carlo fill fraction against the Σ rᵢ⁴ ledger value.
    let expected = expected_fill(&p);
    report.run(|| {
        match p.fill_fraction_mc(samples.max(10_000), seed) {
            Ok((fill, se)) => {
                let tol = f64::min(3.0 * se / CP2_VOLUME * CP2_VOLUME, 0.005).max(3.0 * se);
                CheckRecord::new("fill_fraction", (fill - expected).abs(), tol)
                    .with_samples(samples.max(10_000) as u64, seed)
                    .with_detail(format!("measured {fill:.6}, expected {expected:.6}"))
                    .with_argmax(vec![fill])
            }
            Err(e) => CheckRecord::new("fill_fraction", f64::INFINITY, 0.005)
                .with_argmax(vec![])
                .with_detail(format!("{e}")),
        }
    });

    // Fiber-area gate for disc-bundle constructions.
    let is_bundle = matches!(spec.example.as_str(), "full4" | "regular5");
    report.run(|| {
        if !is_bundle {
            return CheckRecord::skipped("fiber_area", "not a disc-bundle construction");
        }
        let mut worst = 0.0f64;
        let mut arg = vec![];
        for i in 0..20u64 {
            let t = num_complex::Complex64::new(
                sampling::gaussian(seed, i, 0),
                sampling::gaussian(seed, i, 1),
            );
            let q = quadric_param(Some(t));
            let a = fiber_area_profile(&q).total();
            let d = (a - PI / 2.0).abs();
            if d > worst {
                worst = d;
                arg = vec![t.re, t.im];
            }
        }
        let mut rec = CheckRecord::new("fiber_area", worst, 1e-5).with_samples(20, seed);
        if rec.status == crate::report::CheckStatus::Fail {
            rec = rec.with_argmax(arg);
        }
        rec
    });

    // Characteristic preservation on exact (analytic-Jacobian) balls.
    report.run(|| {
        if !p.balls.iter().any(|b| b.has_jacobian()) {
            return CheckRecord::skipped(
                "characteristic_alignment",
                "no exact construction in this packing",
            );
        }
        let (worst, count, argmax) = hopf_alignment_defect(&p, samples.min(200), seed);
        let mut rec =
            CheckRecord::new("characteristic_alignment", worst, TOL_FD).with_samples(count as u64, seed);
        if rec.status == crate::report::CheckStatus::Fail {
            rec = rec.with_argmax(argmax);
        }
        rec
    });

    if let Some(path) = report_path {
        write_out(path, &report.to_json()?)?;
    }
    let exit = if report.passed() { 0 } else { 1 };
    Ok((report, exit))
}

// ---------------------------------------------------------------------------
// surfaces
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VertexJson {
    label: usize,
    ball: usize,
    color: &'static str,
}

#[derive(Serialize)]
struct SphereJson {
    balls: (usize, usize),
    #[serde(with = "f64_17")]
    area: f64,
    area_over_pi: Option<String>,
}

#[derive(Serialize)]
struct SurfaceJson {
    multiplicities: Vec<usize>,
    #[serde(with = "f64_17")]
    area: f64,
    area_over_pi: Option<String>,
    degree: Option<i64>,
    disc_balls: Vec<usize>,
}

#[derive(Serialize)]
struct ErasureJson {
    erased_label: usize,
    recolored: Vec<usize>,
}

#[derive(Serialize)]
struct SurfacesJson {
    schema: u32,
    packing: String,
    arcs: usize,
    vertices: Vec<VertexJson>,
    edges: Vec<(usize, usize)>,
    erasures: Vec<ErasureJson>,
    order_robust: bool,
    spheres: Vec<SphereJson>,
    surfaces: Vec<SurfaceJson>,
}

/// `sympack surfaces --packing P [--resolution R] [--out J] [--obj O]`
pub fn cmd_surfaces(
    packing: &Path,
    resolution: usize,
    out: Option<&Path>,
    obj: Option<&Path>,
) -> Result<String> {
    let spec = load_spec(packing)?;
    let p = resolve_packing(&spec)?;
    let arcs = detect_shared_arcs(&p, resolution, None)?;
    let graph = build_circle_graph(&arcs, &p);
    let (reduced, log) = reduce_graph(&graph);
    let surfaces = assemble_surfaces(&reduced, &p)?;
    let spheres = graph
        .spheres
        .iter()
        .map(|(i, j, c)| {
            let s = two_ball_sphere(&p, *i, *j, c)?;
            Ok(SphereJson {
                balls: (*i, *j),
                area: s.area,
                area_over_pi: s.area_over_pi.map(|q| q.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let doc = SurfacesJson {
        schema: 1,
        packing: p.label.clone(),
        arcs: arcs.len(),
        vertices: graph
            .vertices
            .iter()
            .map(|v| VertexJson {
                label: v.label,
                ball: v.circle.ball_index,
                color: match v.color {
                    Color::Black => "black",
                    Color::Red => "red",
                },
            })
            .collect(),
        edges: graph.edges.clone(),
        erasures: log
            .erasures
            .iter()
            .map(|e| ErasureJson {
                erased_label: e.erased_label,
                recolored: e.recolored.clone(),
            })
            .collect(),
        order_robust: log.order_robust,
        spheres,
        surfaces: surfaces
            .iter()
            .map(|s| SurfaceJson {
                multiplicities: s.multiplicities.clone(),
                area: s.area,
                area_over_pi: s.area_over_pi.map(|q| q.to_string()),
                degree: s.degree,
                disc_balls: s.discs.iter().map(|d| d.circle.ball_index).collect(),
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&doc)?;
    json.push('\n');
    if let Some(path) = out {
        write_out(path, &json)?;
    }
    if let Some(path) = obj {
        let discs: Vec<HopfDisc> = surfaces.iter().flat_map(|s| s.discs.clone()).collect();
        if discs.is_empty() {
            return Err(Error::Parameter(
                "no supporting surface discs to export".into(),
            ));
        }
        write_out(path, &surface_obj(&p.balls, &discs, 24, 64)?)?;
    }
    Ok(json)
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RecordJson {
    d: i64,
    multiset: Vec<i64>,
    delta: i64,
}

#[derive(Serialize)]
struct CertifyJson {
    schema: u32,
    n: usize,
    r2: String,
    d_max: i64,
    records: Vec<RecordJson>,
}

/// `sympack certify --balls N (--from-table | --r2 A/B --dmax D)`
pub fn cmd_certify(
    n: usize,
    from_table: bool,
    r2: Option<num_rational::Ratio<i64>>,
    d_max: Option<i64>,
    out: Option<&Path>,
) -> Result<String> {
    let r2 = if from_table {
        PackingTable::r_squared(n)?
    } else {
        r2.ok_or_else(|| Error::Parameter("--r2 required without --from-table".into()))?
    };
    let d_max = d_max.unwrap_or(8);
    let cert = dream_certificate(n, r2, d_max)?;
    let doc = CertifyJson {
        schema: 1,
        n,
        r2: r2.to_string(),
        d_max,
        records: cert
            .records
            .iter()
            .map(|r| RecordJson {
                d: r.d,
                multiset: r.multiset.clone(),
                delta: r.delta,
            })
            .collect(),
    };
    let mut json = serde_json::to_string_pretty(&doc)?;
    json.push('\n');
    if let Some(path) = out {
        write_out(path, &json)?;
    }
    Ok(json)
}

// ---------------------------------------------------------------------------
// export
// ---------------------------------------------------------------------------

/// `sympack export --what {polytope.svg|surface.obj|trace.json} --packing P --out O`
pub fn cmd_export(what: &str, packing: &Path, out: &Path, resolution: usize) -> Result<()> {
    let spec = load_spec(packing)?;
    match what {
        "polytope.svg" => {
            let tris = toric_spec(&spec)?.ok_or_else(|| {
                Error::Parameter(format!(
                    "example '{}' has no moment-polytope picture",
                    spec.example
                ))
            })?;
            write_out(out, &polytope_svg(&tris))
        }
        "surface.obj" => {
            let p = resolve_packing(&spec)?;
            let arcs = detect_shared_arcs(&p, resolution, None)?;
            let graph = build_circle_graph(&arcs, &p);
            let (reduced, _) = reduce_graph(&graph);
            let surfaces = assemble_surfaces(&reduced, &p)?;
            let mut discs: Vec<HopfDisc> =
                surfaces.iter().flat_map(|s| s.discs.clone()).collect();
            for (i, j, c) in &graph.spheres {
                let s = two_ball_sphere(&p, *i, *j, c)?;
                discs.extend(s.discs);
            }
            if discs.is_empty() {
                return Err(Error::Parameter("packing has no supporting discs".into()));
            }
            write_out(out, &surface_obj(&p.balls, &discs, 24, 64)?)
        }
        "trace.json" => {
            let p = resolve_packing(&spec)?;
            let b = &p.balls[0];
            let start = [b.radius, 0.0, 0.0, 0.0];
            let tr = trace_characteristic(b, &start, 0.01, 20_000)?;
            write_out(out, &trace_json(&tr)?)
        }
        other => Err(Error::Parameter(format!(
            "unknown export format '{other}' (expected polytope.svg, surface.obj, or trace.json)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use tempfile::tempdir;

    #[test]
    fn construct_writes_spec_and_rejects_bogus() {
        let dir = tempdir().unwrap();
        let out = dir.path().join("p.json");
        cmd_construct("regular5", None, 42, &out).unwrap();
        let spec = load_spec(&out).unwrap();
        assert_eq!(spec.balls.len(), 5);
        let r = (2.0f64 / 5.0).sqrt();
        for b in &spec.balls {
            assert!((b.radius - r).abs() < 1e-15);
        }
        assert!(matches!(
            cmd_construct("bogus", None, 42, &out),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn construct_karshon2_with_r1() {
        let dir = tempdir().unwrap();
        let out = dir.path().join("p.json");
        cmd_construct("karshon2", Some(0.8), 42, &out).unwrap();
        let spec = load_spec(&out).unwrap();
        assert!((spec.balls[0].radius - 0.8).abs() < 1e-12);
        assert!((spec.balls[1].radius - 0.6).abs() < 1e-12);
    }

    #[test]
    fn verify_karshon3_passes_and_writes_report() {
        let dir = tempdir().unwrap();
        let pk = dir.path().join("p.json");
        let rp = dir.path().join("r.json");
        cmd_construct("karshon3", None, 42, &pk).unwrap();
        let (report, exit) = cmd_verify(&pk, 20_000, 42, Some(&rp)).unwrap();
        assert_eq!(exit, 0, "{}", report.to_json().unwrap());
        assert!(report.passed());
        let text = std::fs::read_to_string(&rp).unwrap();
        let back = VerificationReport::from_json(&text).unwrap();
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn verify_inflated_packing_fails_with_report() {
        let dir = tempdir().unwrap();
        let pk = dir.path().join("p.json");
        let rp = dir.path().join("r.json");
        let mut spec = spec_for("karshon3", None, 42).unwrap();
        spec.inflate = Some(Inflation {
            ball: 0,
            delta: 1e-2,
        });
        std::fs::write(&pk, serde_json::to_string_pretty(&spec).unwrap()).unwrap();
        let (report, exit) = cmd_verify(&pk, 20_000, 42, Some(&rp)).unwrap();
        assert_eq!(exit, 1);
        assert!(!report.passed());
        assert!(rp.exists(), "report must be written on check failure");
        let failing: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| c.status == crate::report::CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect();
        assert!(
            failing
                .iter()
                .any(|n| n.contains("disjointness") || n.contains("fill_fraction")),
            "expected an overlap/volume failure, got {failing:?}"
        );
    }

    #[test]
    fn verify_usage_errors() {
        let dir = tempdir().unwrap();
        let pk = dir.path().join("p.json");
        cmd_construct("karshon2", Some(0.8), 42, &pk).unwrap();
        assert!(matches!(
            cmd_verify(&pk, 0, 42, None),
            Err(Error::Parameter(_))
        ));
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, "{ not json").unwrap();
        assert!(matches!(cmd_verify(&bad, 100, 42, None), Err(Error::Serde(_))));
    }

    #[test]
    fn certify_from_table_and_usage_error() {
        let json = cmd_certify(5, true, None, Some(4), None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["records"].as_array().unwrap().len(), 1);
        assert_eq!(v["records"][0]["multiset"].as_array().unwrap().len(), 5);
        assert!(matches!(
            cmd_certify(
                2,
                false,
                Some(num_rational::Ratio::new(9, 10)),
                Some(0),
                None
            ),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn export_polytope_svg_and_unknown_format() {
        let dir = tempdir().unwrap();
        let pk = dir.path().join("p.json");
        cmd_construct("karshon3", None, 42, &pk).unwrap();
        let svg = dir.path().join("p.svg");
        cmd_export("polytope.svg", &pk, &svg, 360).unwrap();
        let text = std::fs::read_to_string(&svg).unwrap();
        assert_eq!(text.matches("<polygon").count(), 4);
        assert!(matches!(
            cmd_export("bogus.gif", &pk, &svg, 360),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn resolve_seed_precedence() {
        assert_eq!(resolve_seed(Some(7)), 7);
        // No env manipulation here (tests run in parallel); the env branch is
        // exercised by the binary's integration path.
        assert_eq!(
            resolve_seed(None),
            std::env::var("SYMPACK_SEED")
                .ok()
                .and_then(|v| v.parse().ok())
                .unwrap_or(DEFAULT_SEED)
        );
    }
}
