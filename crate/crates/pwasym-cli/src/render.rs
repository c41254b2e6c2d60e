//! Deterministic SVG rendering of 2D cell decompositions.

use pwasym::geometry::Polytope;
use pwasym::linalg::Point;
use pwasym::scalar::{int, to_decimal_string, zero, Scalar};

use crate::error::CliError;

/// Fill classes for cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellPaint {
    Plain,
    Spurious,
    Controlled,
    Uncontrolled,
}

impl CellPaint {
    fn fill(self) -> &'static str {
        match self {
            CellPaint::Plain => "#a5d6a7",
            CellPaint::Spurious => "#ef9a9a",
            CellPaint::Controlled => "#90caf9",
            CellPaint::Uncontrolled => "#eeeeee",
        }
    }
}

/// Renders cells over the region's bounding box. Only two-dimensional
/// systems can be drawn.
pub fn render_svg(region: &Polytope, cells: &[(Polytope, CellPaint)]) -> Result<String, CliError> {
    if region.dim() != 2 {
        return Err(CliError::Runtime(format!(
            "rendering supports dimension 2 only, system has dimension {}",
            region.dim()
        )));
    }
    let (lo, hi) = region
        .bbox()
        .ok_or_else(|| CliError::Model("region is empty".into()))?;
    let width = &hi[0] - &lo[0];
    let height = &hi[1] - &lo[1];
    let margin = (&width + &height) / int(40);
    let view = |v: &Scalar| to_decimal_string(v, 6);
    // flip the y axis so larger coordinates draw upward
    let flip = |y: &Scalar| &lo[1] + &hi[1] - y;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        view(&(&lo[0] - &margin)),
        view(&(&lo[1] - &margin)),
        view(&(&width + int(2) * &margin)),
        view(&(&height + int(2) * &margin)),
    ));
    let stroke = (&width + &height) / int(400);
    for (cell, paint) in cells {
        let ring = convex_ring(cell.vertices());
        if ring.len() < 3 {
            continue;
        }
        out.push_str("  <polygon points=\"");
        for (i, v) in ring.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(&format!("{},{}", view(&v[0]), view(&flip(&v[1]))));
        }
        out.push_str(&format!(
            "\" fill=\"{}\" stroke=\"#424242\" stroke-width=\"{}\"/>\n",
            paint.fill(),
            view(&stroke)
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Orders 2D vertices counterclockwise around their centroid using exact
/// orientation predicates.
fn convex_ring(vertices: &[Point]) -> Vec<Point> {
    if vertices.len() < 3 {
        return vertices.to_vec();
    }
    let n = int(vertices.len() as i64);
    let cx: Scalar = vertices.iter().map(|v| v[0].clone()).sum::<Scalar>() / &n;
    let cy: Scalar = vertices.iter().map(|v| v[1].clone()).sum::<Scalar>() / &n;
    let upper = |v: &Point| v[1] > cy || (v[1] == cy && v[0] > cx);
    let cross = |a: &Point, b: &Point| -> Scalar {
        (&a[0] - &cx) * (&b[1] - &cy) - (&a[1] - &cy) * (&b[0] - &cx)
    };
    let mut ring = vertices.to_vec();
    ring.sort_by(|a, b| {
        use std::cmp::Ordering;
        match (upper(a), upper(b)) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => {
                let c = cross(a, b);
                if c > zero() {
                    Ordering::Less
                } else if c < zero() {
                    Ordering::Greater
                } else {
                    Ordering::Equal
                }
            }
        }
    });
    ring
}
