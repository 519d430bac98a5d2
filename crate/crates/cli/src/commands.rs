//! The four subcommands and the exit-code contract.
//!
//! Exit codes: 0 success, 1 usage, 2 load/parse/validation problems
//! (including incompatible conversion targets), 3 tolerance or condition
//! failures. Tolerance failures never report as parse errors.

use crate::format::{fmt_f64, Geometry, GeometryFile, Kind};
use ancf_geom::batch::{self, SegmentDims};
use ancf_geom::bspline::BsplineSurface;
use ancf_geom::conversion::{
    ancf_to_bezier, bezier_to_ancf, check_parallelogram, degree_reduce_exact, reduce_element,
};
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Invalid(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::Failure(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::Failure(m) => m,
        }
    }
}

fn invalid(e: impl ToString) -> CliError {
    CliError::Invalid(e.to_string())
}

pub struct ConvertOpts {
    pub to: Kind,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub segment: Option<(usize, usize)>,
    pub all: bool,
    pub tol: f64,
}

pub fn convert(input: &Path, output: &Path, opts: &ConvertOpts) -> Result<(), CliError> {
    if matches!((opts.a, opts.b), (Some(_), None) | (None, Some(_))) {
        return Err(CliError::Usage(
            "provide both --a and --b or neither".to_string(),
        ));
    }
    let to_ancf = matches!(opts.to, Kind::Ancf48 | Kind::Ancf36);
    if !to_ancf && opts.a.is_some() {
        return Err(CliError::Usage(
            "--a/--b only apply when converting to an ANCF element".to_string(),
        ));
    }

    let file = GeometryFile::load(input).map_err(CliError::Invalid)?;
    if (opts.segment.is_some() || opts.all) && file.kind() != Kind::Bspline {
        return Err(CliError::Invalid(format!(
            "--segment/--all apply to B-spline inputs, got {}",
            file.kind().as_str()
        )));
    }

    match (&file.geometry, opts.to) {
        (Geometry::Bezier(net), Kind::Ancf48) => {
            let (a, b) = (opts.a.unwrap_or(1.0), opts.b.unwrap_or(1.0));
            let (elem, _) = bezier_to_ancf(net, a, b).map_err(invalid)?;
            write_one(&file.with_geometry(Geometry::Ancf48(elem)), output)
        }
        (Geometry::Bezier(net), Kind::Ancf36) => {
            let (a, b) = (opts.a.unwrap_or(1.0), opts.b.unwrap_or(1.0));
            let (elem, _) = bezier_to_ancf(net, a, b).map_err(invalid)?;
            let reduced =
                reduce_element(&elem, opts.tol).map_err(|e| CliError::Failure(e.to_string()))?;
            write_one(&file.with_geometry(Geometry::Ancf36(reduced)), output)
        }
        (Geometry::Bspline(surf), Kind::Ancf48 | Kind::Ancf36) => {
            convert_bspline(&file, surf, output, opts)
        }
        (Geometry::Ancf48(elem), Kind::Bezier) => {
            let net = degree_reduce_exact(&ancf_to_bezier(elem), opts.tol);
            write_one(&file.with_geometry(Geometry::Bezier(net)), output)
        }
        (Geometry::Ancf48(elem), Kind::Ancf36) => {
            let reduced =
                reduce_element(elem, opts.tol).map_err(|e| CliError::Failure(e.to_string()))?;
            write_one(&file.with_geometry(Geometry::Ancf36(reduced)), output)
        }
        (Geometry::Ancf36(elem), Kind::Bezier) => {
            let net = degree_reduce_exact(&ancf_to_bezier(&elem.to_full_element()), opts.tol);
            write_one(&file.with_geometry(Geometry::Bezier(net)), output)
        }
        (Geometry::Ancf36(elem), Kind::Ancf48) => {
            write_one(&file.with_geometry(Geometry::Ancf48(elem.to_full_element())), output)
        }
        (_, to) => Err(CliError::Invalid(format!(
            "cannot convert {} to {}",
            file.kind().as_str(),
            to.as_str()
        ))),
    }
}

fn convert_bspline(
    file: &GeometryFile,
    surf: &BsplineSurface,
    output: &Path,
    opts: &ConvertOpts,
) -> Result<(), CliError> {
    let all_segments = surf.segments();
    let selected: Vec<(usize, usize)> = if let Some((e, f)) = opts.segment {
        if !all_segments.contains(&(e, f)) {
            return Err(CliError::Invalid(format!(
                "({e},{f}) is not a non-degenerate segment; valid segments: {all_segments:?}"
            )));
        }
        vec![(e, f)]
    } else if opts.all || all_segments.len() == 1 {
        all_segments
    } else {
        return Err(CliError::Invalid(format!(
            "surface has {} segments; pass --segment e,f or --all",
            all_segments.len()
        )));
    };

    let dims = match (opts.a, opts.b) {
        (Some(a), Some(b)) => SegmentDims::Fixed(a, b),
        _ => SegmentDims::KnotSpan,
    };

    // Convert everything up front (in parallel for --all), write serially.
    let converted: Vec<_> = if selected.len() == surf.segments().len() {
        batch::convert_all_segments(surf, dims).map_err(invalid)?
    } else {
        selected
            .iter()
            .map(|&(e, f)| {
                let (a, b) = match dims {
                    SegmentDims::KnotSpan => {
                        ancf_geom::conversion::segment_dims(surf, e, f).map_err(invalid)?
                    }
                    SegmentDims::Fixed(a, b) => (a, b),
                };
                let (element, transform) =
                    ancf_geom::conversion::bspline_segment_to_ancf(surf, e, f, a, b)
                        .map_err(invalid)?;
                Ok(batch::SegmentElement {
                    seg_u: e,
                    seg_v: f,
                    element,
                    transform,
                })
            })
            .collect::<Result<_, CliError>>()?
    };

    let multi = converted.len() > 1;
    let mut failures = Vec::new();
    for seg in &converted {
        let path = if multi {
            segment_path(output, seg.seg_u, seg.seg_v)
        } else {
            output.to_path_buf()
        };
        let geometry = match opts.to {
            Kind::Ancf48 => Geometry::Ancf48(seg.element.clone()),
            Kind::Ancf36 => match reduce_element(&seg.element, opts.tol) {
                Ok(reduced) => Geometry::Ancf36(reduced),
                Err(e) => {
                    failures.push((seg.seg_u, seg.seg_v, e));
                    continue;
                }
            },
            _ => unreachable!("target checked by caller"),
        };
        write_one(&file.with_geometry(geometry), &path)?;
    }

    if !failures.is_empty() {
        for (e, f, err) in &failures {
            eprintln!("segment ({e},{f}): {err}");
        }
        return Err(CliError::Failure(format!(
            "{} of {} segments failed the mixed-slope condition",
            failures.len(),
            converted.len()
        )));
    }
    Ok(())
}

fn segment_path(output: &Path, e: usize, f: usize) -> PathBuf {
    let stem = output
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match output.extension() {
        Some(ext) => format!("{stem}_e{e}f{f}.{}", ext.to_string_lossy()),
        None => format!("{stem}_e{e}f{f}"),
    };
    output.with_file_name(name)
}

fn write_one(file: &GeometryFile, path: &Path) -> Result<(), CliError> {
    file.save(path).map_err(CliError::Invalid)?;
    println!("wrote {} ({})", path.display(), file.kind().as_str());
    Ok(())
}

pub fn compare(grid: usize, tol: f64, path_a: &Path, path_b: &Path) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".to_string()));
    }
    let a = GeometryFile::load(path_a).map_err(CliError::Invalid)?;
    let b = GeometryFile::load(path_b).map_err(CliError::Invalid)?;

    let (max, mean) = batch::grid_deviation(
        |xi, eta| a.eval_normalized(xi, eta).expect("unit square is valid"),
        |xi, eta| b.eval_normalized(xi, eta).expect("unit square is valid"),
        grid,
    );
    let scale = a.scale().max(b.scale());
    let relative = max / scale;
    let pass = relative <= tol;

    println!("grid {grid}");
    println!("max_deviation {}", fmt_f64(max));
    println!("mean_deviation {}", fmt_f64(mean));
    println!("scale {}", fmt_f64(scale));
    println!("relative_max {}", fmt_f64(relative));
    println!("tol {}", fmt_f64(tol));
    println!("result {}", if pass { "PASS" } else { "FAIL" });

    if pass {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "relative deviation {relative:.3e} exceeds tolerance {tol:.3e}"
        )))
    }
}

pub fn check_polygon(tol: f64, input: &Path) -> Result<(), CliError> {
    let file = GeometryFile::load(input).map_err(CliError::Invalid)?;
    let net = match &file.geometry {
        Geometry::Bezier(net) => net,
        _ => {
            return Err(CliError::Invalid(format!(
                "check-polygon expects a bezier geometry, got {}",
                file.kind().as_str()
            )))
        }
    };
    let check = check_parallelogram(net, tol).map_err(invalid)?;
    for (corner, residual) in &check.residuals {
        println!("corner {corner} residual {}", fmt_f64(*residual));
    }
    println!("threshold {}", fmt_f64(check.threshold));
    println!(
        "result {}",
        if check.satisfied { "SATISFIED" } else { "VIOLATED" }
    );
    if check.satisfied {
        Ok(())
    } else {
        Err(CliError::Failure(
            "control polygon does not satisfy the parallelogram conditions".to_string(),
        ))
    }
}

pub fn sample(grid: usize, input: &Path, output: &Path) -> Result<(), CliError> {
    if grid < 2 {
        return Err(CliError::Usage("--grid must be at least 2".to_string()));
    }
    let file = GeometryFile::load(input).map_err(CliError::Invalid)?;
    let rows = batch::sample_grid(
        |xi, eta| file.eval_normalized(xi, eta).expect("unit square is valid"),
        grid,
    );
    let mut text = String::from("# xi eta x y z\n");
    for (xi, eta, p) in &rows {
        text.push_str(&format!(
            "{} {} {} {} {}\n",
            fmt_f64(*xi),
            fmt_f64(*eta),
            fmt_f64(p.x),
            fmt_f64(p.y),
            fmt_f64(p.z)
        ));
    }
    std::fs::write(output, text)
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", output.display())))?;
    println!("wrote {} ({} rows)", output.display(), rows.len());
    Ok(())
}
