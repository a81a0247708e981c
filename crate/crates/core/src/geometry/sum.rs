use nalgebra::Rotation3;

use super::{ClosedPolyline, GeometryError, Point, Vector};

// Where a summand is opened: the extreme vertex, its neighbour along the cut
// edge, and the new vertex inserted on that edge.
struct Opening {
    extreme: usize,
    neighbour: usize,
    inserted: Point,
}

/// Connected sum presentation with `b` stacked entirely above `a`.
///
/// `a` is opened just below its global maximum and `b` just above its global
/// minimum; two monotone strands join the openings. Every level of `a` or `b`
/// keeps its count and the levels in between meet exactly the two strands, so
/// the trunk of the result is the larger of the two trunks. The result is
/// rescaled to unit diameter.
pub fn connected_sum_presentation(
    a: &ClosedPolyline,
    b: &ClosedPolyline,
) -> Result<ClosedPolyline, GeometryError> {
    a.require_generic()?;
    b.require_generic()?;
    let a = a.normalized();
    let b = b.normalized();

    let mut last_err = None;
    // prefer opening along the higher (resp. lower) neighbour, fall back to the other
    for (choice_a, choice_b) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
        let top = open_at_extreme(&a, true, choice_a);
        let bottom = open_at_extreme(&b, false, choice_b);
        match join(&a, &top, &b, &bottom) {
            Ok(curve) => return Ok(curve),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap())
}

fn open_at_extreme(curve: &ClosedPolyline, top: bool, choice: usize) -> Opening {
    let pts = curve.vertices();
    let n = pts.len();
    let key = |i: &usize| if top { pts[*i].z } else { -pts[*i].z };
    let extreme = (0..n).max_by(|i, j| key(i).total_cmp(&key(j))).unwrap();
    let mut neighbours = [(extreme + n - 1) % n, (extreme + 1) % n];
    // nearest neighbour in height first
    neighbours.sort_by(|i, j| key(j).total_cmp(&key(i)));
    let neighbour = neighbours[choice];
    let runner_up = (0..n)
        .filter(|&i| i != extreme)
        .map(|i| key(&i))
        .fold(f64::NEG_INFINITY, f64::max);
    // a quarter of the way from the extreme down to the next vertex height
    let depth = 0.25 * (key(&extreme) - runner_up);
    let (p, q) = (pts[extreme], pts[neighbour]);
    let f = depth / (p.z - q.z).abs();
    Opening {
        extreme,
        neighbour,
        inserted: p + (q - p) * f,
    }
}

// Vertices of `curve` from `start` to `end` walking away from `avoid`,
// where `avoid` is the neighbour of `start` across the removed edge.
fn walk(curve: &ClosedPolyline, start: usize, avoid: usize) -> Vec<Point> {
    let n = curve.len();
    let pts = curve.vertices();
    let step = if (start + 1) % n == avoid { n - 1 } else { 1 };
    (0..n).map(|k| pts[(start + k * step) % n]).collect()
}

fn horizontal(v: &Vector) -> Vector {
    Vector::new(v.x, v.y, 0.0)
}

fn join(
    a: &ClosedPolyline,
    top: &Opening,
    b: &ClosedPolyline,
    bottom: &Opening,
) -> Result<ClosedPolyline, GeometryError> {
    let pa = a.vertices();
    let pb = b.vertices();
    let apex = pa[top.extreme];
    let base = pb[bottom.extreme];

    // rotate b about the vertical so both strands leave in the same direction
    let da = horizontal(&(top.inserted - apex));
    let db = horizontal(&(bottom.inserted - base));
    let angle = if da.norm() > 1e-12 && db.norm() > 1e-12 {
        da.y.atan2(da.x) - db.y.atan2(db.x)
    } else {
        0.0
    };
    let rotation = Rotation3::from_axis_angle(&Vector::z_axis(), angle);
    let gap = 0.5;
    let lift = |p: &Point| -> Point {
        let local = rotation * (p - base);
        Point::new(apex.x + local.x, apex.y + local.y, apex.z + gap + local.z)
    };

    // a: inserted, neighbour, ..., apex; then up to b: base, ..., b-neighbour, b-inserted
    let mut vertices = vec![top.inserted];
    let mut a_path = walk(a, top.neighbour, top.extreme);
    a_path.truncate(a.len());
    vertices.extend(a_path);
    let b_path = walk(b, bottom.extreme, bottom.neighbour);
    vertices.extend(b_path.iter().map(&lift));
    vertices.push(lift(&bottom.inserted));

    let curve = ClosedPolyline::new(vertices)
        .map_err(|e| GeometryError::Construction(format!("connected sum strands collide: {e}")))?;
    let curve = curve.normalized();
    if curve.is_generic() {
        Ok(curve)
    } else {
        let eps = (0.25 * curve.feature_size()).min(1e-7);
        curve.perturb_generic(eps)
    }
}
