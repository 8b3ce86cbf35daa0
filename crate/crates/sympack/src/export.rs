//! Geometry exports: moment-polytope SVG, Hopf-disc OBJ meshes, and
//! characteristic-trace JSON.

use serde::Serialize;
use std::f64::consts::PI;

use crate::characteristics::{HopfDisc, TraceReport};
use crate::embedding::{BallEmbedding, DomainPoint};
use crate::projective::ProjectivePoint;
use crate::quadric::project_to_quadric;
use crate::report::{f64_17, json_number};
use crate::toric::MomentTriangle;
use crate::{Error, Result};

/// Pixels per action unit in SVG exports.
pub const SVG_SCALE: f64 = 400.0;
const SVG_MARGIN: f64 = 20.0;

/// SVG of the CP² moment triangle (vertices (0,0), (1/2,0), (0,1/2) in
/// action units) together with the packing's corner sub-triangles.
/// Coordinates are action units × 400 px with the origin at the bottom-left.
pub fn polytope_svg(triangles: &[MomentTriangle]) -> String {
    let width = SVG_SCALE * 0.5 + 2.0 * SVG_MARGIN;
    let height = width;
    let px = |p: [f64; 2]| -> (f64, f64) {
        (
            SVG_MARGIN + p[0] * SVG_SCALE,
            height - SVG_MARGIN - p[1] * SVG_SCALE,
        )
    };
    let poly = |vs: &[[f64; 2]]| -> String {
        vs.iter()
            .map(|&v| {
                let (x, y) = px(v);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" \
         viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    ));
    let ambient = [[0.0, 0.0], [0.5, 0.0], [0.0, 0.5]];
    out.push_str(&format!(
        "  <polygon points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"2\"/>\n",
        poly(&ambient)
    ));
    const FILLS: [&str; 6] = ["#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628"];
    for (i, t) in triangles.iter().enumerate() {
        out.push_str(&format!(
            "  <polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.45\" stroke=\"{}\" \
             stroke-width=\"1\"/>\n",
            poly(&t.vertices()),
            FILLS[i % FILLS.len()],
            FILLS[i % FILLS.len()],
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Map a CP² point to the unit-sphere model of the quadric base: project to
/// the quadric, then send the pencil parameter t through the inverse
/// stereographic projection (t = ∞ ↦ north pole).
pub fn sphere_model(p: &ProjectivePoint) -> Result<[f64; 3]> {
    let fc = project_to_quadric(p)?;
    Ok(match fc.base.t {
        Some(t) => {
            let d = t.norm_sqr() + 1.0;
            [2.0 * t.re / d, 2.0 * t.im / d, (t.norm_sqr() - 1.0) / d]
        }
        None => [0.0, 0.0, 1.0],
    })
}

fn disc_point(disc: &HopfDisc, rho: f64, theta: f64) -> DomainPoint {
    let r = disc.circle.radius();
    let x = disc.circle.point(theta);
    let s = rho / r;
    [x[0] * s, x[1] * s, x[2] * s, x[3] * s]
}

/// Wavefront OBJ of the discs' images, drawn on the unit-sphere model of the
/// quadric base so that shared boundary circles coincide exactly.  Each disc
/// becomes its own OBJ object with a polar-grid triangulation.
pub fn surface_obj(
    balls: &[BallEmbedding],
    discs: &[HopfDisc],
    radial: usize,
    angular: usize,
) -> Result<String> {
    if radial < 2 || angular < 8 {
        return Err(Error::Parameter(
            "surface OBJ needs radial >= 2 and angular >= 8".into(),
        ));
    }
    let mut out = String::from("# Hopf-disc images on the quadric base sphere\n");
    let mut base = 0usize; // OBJ vertex indices are global and 1-based
    for (k, disc) in discs.iter().enumerate() {
        let emb = balls
            .get(disc.circle.ball_index)
            .ok_or_else(|| Error::Parameter(format!("disc {k}: no such ball")))?;
        out.push_str(&format!("o disc_{k}_ball_{}\n", disc.circle.ball_index));
        let r = disc.circle.radius();
        let mut count = 0usize;
        // Center vertex, then `radial` rings of `angular` vertices.
        for (rho, thetas) in std::iter::once((1e-6 * r, 1))
            .chain((1..=radial).map(|i| (r * i as f64 / radial as f64, angular)))
        {
            for j in 0..thetas {
                let theta = 2.0 * PI * j as f64 / thetas as f64;
                let p = emb.point(&disc_point(disc, rho, theta));
                let v = sphere_model(&p)?;
                out.push_str(&format!("v {:.9} {:.9} {:.9}\n", v[0], v[1], v[2]));
                count += 1;
            }
        }
        let ring = |i: usize, j: usize| base + 2 + (i - 1) * angular + (j % angular);
        for j in 0..angular {
            out.push_str(&format!("f {} {} {}\n", base + 1, ring(1, j), ring(1, j + 1)));
        }
        for i in 1..radial {
            for j in 0..angular {
                let (a, b, c, d) = (ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j));
                out.push_str(&format!("f {a} {b} {c}\nf {a} {c} {d}\n"));
            }
        }
        base += count;
    }
    Ok(out)
}

#[derive(Serialize)]
struct TraceJson {
    schema: u32,
    points: Vec<PointRow>,
    #[serde(with = "f64_17")]
    return_distance: f64,
    period: Option<serde_json::Number>,
    closed: bool,
    truncated: bool,
    steps: usize,
}

struct PointRow([f64; 4]);
impl Serialize for PointRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(4))?;
        for x in self.0 {
            seq.serialize_element(&json_number(x))?;
        }
        seq.end()
    }
}

/// JSON polyline of a characteristic trace (schema 1, 17-digit numbers).
pub fn trace_json(trace: &TraceReport) -> Result<String> {
    let doc = TraceJson {
        schema: 1,
        points: trace.points.iter().map(|&x| PointRow(x)).collect(),
        return_distance: trace.return_distance,
        period: trace.period.map(json_number),
        closed: trace.closed,
        truncated: trace.truncated,
        steps: trace.steps,
    };
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}
