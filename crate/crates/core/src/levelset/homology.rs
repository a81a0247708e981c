use super::{LevelError, SectionCurve};
use crate::geometry::TubeMesh;

// Representative of `d` modulo `n` in (-n/2, n/2].
fn centred(d: i64, n: i64) -> i64 {
    let r = d.rem_euclid(n);
    if 2 * r > n {
        r - n
    } else {
        r
    }
}

/// Unwrapped grid coordinates of mesh vertices in a chart centred on `anchor`.
fn chart(mesh: &TubeMesh, anchor: usize, v: usize) -> (f64, f64) {
    let (l, m) = (mesh.longitudinal_res as i64, mesh.meridional_res as i64);
    let (i0, j0) = mesh.grid_coords(anchor);
    let (i, j) = mesh.grid_coords(v);
    (
        (i0 as i64 + centred(i as i64 - i0 as i64, l)) as f64,
        (j0 as i64 + centred(j as i64 - j0 as i64, m)) as f64,
    )
}

/// Class of a closed curve on the mesh as `(meridian, longitude)` coordinates.
///
/// Each segment lies in one triangle, so it has a well-defined displacement in
/// the grid's universal cover; the total displacement of a closed curve is
/// `(longitude * L, meridian * M)` for an `L x M` grid. This equals the
/// algebraic intersection numbers with generic translates of the reference
/// cycles, but needs no special handling when the curve touches them.
pub fn curve_class_on_torus(
    mesh: &TubeMesh,
    curve: &SectionCurve,
) -> Result<(i64, i64), LevelError> {
    let mut di = 0.0;
    let mut dj = 0.0;
    let n = curve.points.len();
    for k in 0..n {
        let tri = mesh.triangles[curve.triangles[k]];
        let anchor = tri[0];
        let local = |p: &super::EdgePoint| -> Result<(f64, f64), LevelError> {
            if !tri.contains(&p.lo) || !tri.contains(&p.hi) {
                return Err(LevelError::Topology(format!(
                    "curve point on edge ({}, {}) is not in triangle {}",
                    p.lo, p.hi, curve.triangles[k]
                )));
            }
            let a = chart(mesh, anchor, p.lo);
            let b = chart(mesh, anchor, p.hi);
            Ok((a.0 + (b.0 - a.0) * p.t, a.1 + (b.1 - a.1) * p.t))
        };
        let p = local(&curve.points[k])?;
        let q = local(&curve.points[(k + 1) % n])?;
        di += q.0 - p.0;
        dj += q.1 - p.1;
    }
    let longitude = di / mesh.longitudinal_res as f64;
    let meridian = dj / mesh.meridional_res as f64;
    let (lr, mr) = (longitude.round(), meridian.round());
    if (longitude - lr).abs() > 1e-6 || (meridian - mr).abs() > 1e-6 {
        return Err(LevelError::Topology(format!(
            "curve does not close up on the torus (displacement {di}, {dj})"
        )));
    }
    Ok((mr as i64, lr as i64))
}

/// Primitive class up to sign, normalised so the first nonzero coordinate is
/// positive; `None` for the zero class or a non-primitive one.
pub fn primitive_direction(class: (i64, i64)) -> Option<(i64, i64)> {
    let g = gcd(class.0.unsigned_abs(), class.1.unsigned_abs());
    if g != 1 {
        return None;
    }
    let sign = if class.0 < 0 || (class.0 == 0 && class.1 < 0) {
        -1
    } else {
        1
    };
    Some((sign * class.0, sign * class.1))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
