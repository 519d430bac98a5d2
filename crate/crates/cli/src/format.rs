//! Geometry file format: one human-readable text document per geometry.
//!
//! A document is a sequence of `keyword value...` lines terminated by
//! `end`. Blank lines and `#` comments are ignored on load; the writer
//! emits a fixed canonical layout so load-save-load is byte stable.
//!
//! ```text
//! geometry bezier
//! name roof patch
//! degree_u 3
//! degree_v 2
//! grid 4 3
//! point <x> <y> <z>     (nu*nv lines, u-index slow, v-index fast)
//! end
//! ```
//!
//! B-spline documents add `knots_u`/`knots_v` lines; element documents
//! (`ancf48`, `ancf36`) replace degrees and points with `dims <a> <b>` and
//! 16 or 12 `node` lines in the frozen nodal order.
//!
//! Numbers are written with 17 significant digits, which round-trips f64
//! exactly.

use ancf_geom::ancf::{AncfElement36, AncfElement48};
use ancf_geom::bezier::BezierNet;
use ancf_geom::bspline::{BsplineSurface, KnotVector};
use ancf_geom::Vec3;
use std::fmt::Write as _;
use std::path::Path;

/// 17-significant-digit form that parses back to the identical f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Bezier,
    Bspline,
    Ancf48,
    Ancf36,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Bezier => "bezier",
            Kind::Bspline => "bspline",
            Kind::Ancf48 => "ancf48",
            Kind::Ancf36 => "ancf36",
        }
    }

    pub fn from_str(s: &str) -> Option<Kind> {
        match s {
            "bezier" => Some(Kind::Bezier),
            "bspline" => Some(Kind::Bspline),
            "ancf48" => Some(Kind::Ancf48),
            "ancf36" => Some(Kind::Ancf36),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    Bezier(BezierNet),
    Bspline(BsplineSurface),
    Ancf48(AncfElement48),
    Ancf36(AncfElement36),
}

/// A geometry plus its file metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryFile {
    pub geometry: Geometry,
    pub name: Option<String>,
    pub units: Option<String>,
    pub created: Option<String>,
}

impl GeometryFile {
    #[cfg(test)]
    pub fn bare(geometry: Geometry) -> Self {
        Self {
            geometry,
            name: None,
            units: None,
            created: None,
        }
    }

    /// Same metadata, different payload.
    pub fn with_geometry(&self, geometry: Geometry) -> Self {
        Self {
            geometry,
            name: self.name.clone(),
            units: self.units.clone(),
            created: self.created.clone(),
        }
    }

    pub fn kind(&self) -> Kind {
        match &self.geometry {
            Geometry::Bezier(_) => Kind::Bezier,
            Geometry::Bspline(_) => Kind::Bspline,
            Geometry::Ancf48(_) => Kind::Ancf48,
            Geometry::Ancf36(_) => Kind::Ancf36,
        }
    }

    /// Point map over the normalized unit square: Bezier nets use their
    /// native parameters, B-splines map the full valid rectangle, elements
    /// map `x = xi a`, `y = eta b`.
    pub fn eval_normalized(&self, xi: f64, eta: f64) -> ancf_geom::Result<Vec3> {
        match &self.geometry {
            Geometry::Bezier(net) => net.eval(xi, eta),
            Geometry::Bspline(surf) => surf.eval_normalized(xi, eta),
            Geometry::Ancf48(elem) => elem.eval_normalized(xi, eta),
            Geometry::Ancf36(elem) => elem.eval_normalized(xi, eta),
        }
    }

    /// Bounding-box diagonal scale of the payload.
    pub fn scale(&self) -> f64 {
        match &self.geometry {
            Geometry::Bezier(net) => net.scale(),
            Geometry::Bspline(surf) => surf.scale(),
            Geometry::Ancf48(elem) => elem.scale(),
            Geometry::Ancf36(elem) => elem.to_full_element().scale(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "geometry {}", self.kind().as_str());
        if let Some(name) = &self.name {
            let _ = writeln!(out, "name {name}");
        }
        if let Some(units) = &self.units {
            let _ = writeln!(out, "units {units}");
        }
        if let Some(created) = &self.created {
            let _ = writeln!(out, "created {created}");
        }
        match &self.geometry {
            Geometry::Bezier(net) => {
                let _ = writeln!(out, "degree_u {}", net.degree_u());
                let _ = writeln!(out, "degree_v {}", net.degree_v());
                let _ = writeln!(out, "grid {} {}", net.degree_u() + 1, net.degree_v() + 1);
                for p in net.points() {
                    write_vec(&mut out, "point", p);
                }
            }
            Geometry::Bspline(surf) => {
                let _ = writeln!(out, "degree_u {}", surf.degree_u());
                let _ = writeln!(out, "degree_v {}", surf.degree_v());
                let _ = writeln!(out, "grid {} {}", surf.num_u(), surf.num_v());
                write_knots(&mut out, "knots_u", surf.knots_u());
                write_knots(&mut out, "knots_v", surf.knots_v());
                for p in surf.points() {
                    write_vec(&mut out, "point", p);
                }
            }
            Geometry::Ancf48(elem) => {
                let _ = writeln!(out, "dims {} {}", fmt_f64(elem.a()), fmt_f64(elem.b()));
                for n in elem.nodes() {
                    write_vec(&mut out, "node", n);
                }
            }
            Geometry::Ancf36(elem) => {
                let _ = writeln!(out, "dims {} {}", fmt_f64(elem.a()), fmt_f64(elem.b()));
                for n in elem.nodes() {
                    write_vec(&mut out, "node", n);
                }
            }
        }
        out.push_str("end\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        Parser::new(text).parse()
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn save(&self, path: &Path) -> Result<(), String> {
        std::fs::write(path, self.to_text())
            .map_err(|e| format!("cannot write {}: {e}", path.display()))
    }
}

fn write_vec(out: &mut String, key: &str, v: &Vec3) {
    let _ = writeln!(
        out,
        "{key} {} {} {}",
        fmt_f64(v.x),
        fmt_f64(v.y),
        fmt_f64(v.z)
    );
}

fn write_knots(out: &mut String, key: &str, knots: &KnotVector) {
    let parts: Vec<String> = knots.knots().iter().map(|&k| fmt_f64(k)).collect();
    let _ = writeln!(out, "{key} {}", parts.join(" "));
}

struct Parser<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

#[derive(Default)]
struct Fields {
    name: Option<String>,
    units: Option<String>,
    created: Option<String>,
    degree_u: Option<usize>,
    degree_v: Option<usize>,
    grid: Option<(usize, usize)>,
    knots_u: Option<Vec<f64>>,
    knots_v: Option<Vec<f64>>,
    dims: Option<(f64, f64)>,
    points: Vec<Vec3>,
    nodes: Vec<Vec3>,
    ended: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            lines: text.lines().enumerate(),
        }
    }

    fn parse(mut self) -> Result<GeometryFile, String> {
        let kind = loop {
            let (no, line) = self
                .lines
                .next()
                .ok_or_else(|| "empty document".to_string())?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let rest = line
                .strip_prefix("geometry ")
                .ok_or_else(|| format!("line {}: expected 'geometry <kind>'", no + 1))?;
            break Kind::from_str(rest.trim())
                .ok_or_else(|| format!("line {}: unknown geometry kind '{}'", no + 1, rest))?;
        };

        let mut f = Fields::default();
        for (no, raw) in self.lines.by_ref() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = no + 1;
            let (key, rest) = match line.split_once(char::is_whitespace) {
                Some((k, r)) => (k, r.trim()),
                None => (line, ""),
            };
            match key {
                "end" => {
                    f.ended = true;
                    break;
                }
                "name" => f.name = Some(rest.to_string()),
                "units" => f.units = Some(rest.to_string()),
                "created" => f.created = Some(rest.to_string()),
                "degree_u" => f.degree_u = Some(parse_usize(rest, lineno)?),
                "degree_v" => f.degree_v = Some(parse_usize(rest, lineno)?),
                "grid" => {
                    let nums = parse_usize_list(rest, lineno)?;
                    if nums.len() != 2 {
                        return Err(format!("line {lineno}: grid needs two integers"));
                    }
                    f.grid = Some((nums[0], nums[1]));
                }
                "knots_u" => f.knots_u = Some(parse_f64_list(rest, lineno)?),
                "knots_v" => f.knots_v = Some(parse_f64_list(rest, lineno)?),
                "dims" => {
                    let nums = parse_f64_list(rest, lineno)?;
                    if nums.len() != 2 {
                        return Err(format!("line {lineno}: dims needs two numbers"));
                    }
                    f.dims = Some((nums[0], nums[1]));
                }
                "point" => f.points.push(parse_vec(rest, lineno)?),
                "node" => f.nodes.push(parse_vec(rest, lineno)?),
                other => return Err(format!("line {lineno}: unknown keyword '{other}'")),
            }
        }
        if !f.ended {
            return Err("missing 'end' line".to_string());
        }

        let geometry = assemble(kind, &f)?;
        Ok(GeometryFile {
            geometry,
            name: f.name,
            units: f.units,
            created: f.created,
        })
    }
}

fn assemble(kind: Kind, f: &Fields) -> Result<Geometry, String> {
    match kind {
        Kind::Bezier => {
            let du = f.degree_u.ok_or("missing degree_u")?;
            let dv = f.degree_v.ok_or("missing degree_v")?;
            if let Some((nu, nv)) = f.grid {
                if (nu, nv) != (du + 1, dv + 1) {
                    return Err(format!(
                        "grid {nu} {nv} does not match degrees ({du}, {dv})"
                    ));
                }
            }
            BezierNet::new(du, dv, f.points.clone())
                .map(Geometry::Bezier)
                .map_err(|e| e.to_string())
        }
        Kind::Bspline => {
            let du = f.degree_u.ok_or("missing degree_u")?;
            let dv = f.degree_v.ok_or("missing degree_v")?;
            let (nu, nv) = f.grid.ok_or("missing grid")?;
            let ku = KnotVector::new(f.knots_u.clone().ok_or("missing knots_u")?)
                .map_err(|e| e.to_string())?;
            let kv = KnotVector::new(f.knots_v.clone().ok_or("missing knots_v")?)
                .map_err(|e| e.to_string())?;
            BsplineSurface::new(du, dv, nu, nv, f.points.clone(), ku, kv)
                .map(Geometry::Bspline)
                .map_err(|e| e.to_string())
        }
        Kind::Ancf48 => {
            let (a, b) = f.dims.ok_or("missing dims")?;
            let nodes: [Vec3; 16] = f
                .nodes
                .clone()
                .try_into()
                .map_err(|v: Vec<Vec3>| format!("ancf48 needs 16 nodes, got {}", v.len()))?;
            AncfElement48::new(a, b, nodes)
                .map(Geometry::Ancf48)
                .map_err(|e| e.to_string())
        }
        Kind::Ancf36 => {
            let (a, b) = f.dims.ok_or("missing dims")?;
            let nodes: [Vec3; 12] = f
                .nodes
                .clone()
                .try_into()
                .map_err(|v: Vec<Vec3>| format!("ancf36 needs 12 nodes, got {}", v.len()))?;
            AncfElement36::new(a, b, nodes)
                .map(Geometry::Ancf36)
                .map_err(|e| e.to_string())
        }
    }
}

fn parse_usize(s: &str, lineno: usize) -> Result<usize, String> {
    s.parse()
        .map_err(|_| format!("line {lineno}: expected an integer, got '{s}'"))
}

fn parse_usize_list(s: &str, lineno: usize) -> Result<Vec<usize>, String> {
    s.split_whitespace().map(|t| parse_usize(t, lineno)).collect()
}

fn parse_f64(s: &str, lineno: usize) -> Result<f64, String> {
    s.parse()
        .map_err(|_| format!("line {lineno}: expected a number, got '{s}'"))
}

fn parse_f64_list(s: &str, lineno: usize) -> Result<Vec<f64>, String> {
    s.split_whitespace().map(|t| parse_f64(t, lineno)).collect()
}

fn parse_vec(s: &str, lineno: usize) -> Result<Vec3, String> {
    let nums = parse_f64_list(s, lineno)?;
    if nums.len() != 3 {
        return Err(format!("line {lineno}: expected 3 coordinates"));
    }
    Ok(Vec3::new(nums[0], nums[1], nums[2]))
}
