//! Polygonal-curve oracle for the line-integral form of the elastic energy.
//!
//! Curves are closed oriented polylines. All integrals use the segment
//! midpoint rule with a caller-chosen subdivision count, and the 1/r kernel
//! is regularized as 1/sqrt(r^2 + eps^2) so coincident and adjacent nodes
//! stay finite. Summation order is fixed, so results are deterministic.

use crate::error::{Error, Result};

/// Closed polygonal curve with an orientation sign.
///
/// Reversing the point order and flipping the sign describes the same
/// physical curve; flipping only the sign gives the opposite orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedPolyline {
    points: Vec<[f64; 2]>,
    orientation: i8,
    closed: bool,
}

impl OrientedPolyline {
    pub fn new(points: Vec<[f64; 2]>, orientation: i8) -> Result<Self> {
        if orientation != 1 && orientation != -1 {
            return Err(Error::InvalidInput(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        if points.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "a closed polyline needs at least 3 points, got {}",
                points.len()
            )));
        }
        for p in &points {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite vertex ({}, {})",
                    p[0], p[1]
                )));
            }
        }
        for k in 0..points.len() {
            let a = points[k];
            let b = points[(k + 1) % points.len()];
            if a == b {
                return Err(Error::InvalidInput(format!(
                    "consecutive vertices {k} and {} coincide at ({}, {})",
                    (k + 1) % points.len(),
                    a[0],
                    a[1]
                )));
            }
        }
        Ok(Self {
            points,
            orientation,
            closed: true,
        })
    }

    /// Regular n-gon approximation of a circle, counterclockwise for
    /// orientation +1.
    pub fn circle(center: [f64; 2], radius: f64, segments: usize, orientation: i8) -> Result<Self> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "circle radius must be a positive real, got {radius}"
            )));
        }
        if segments < 3 {
            return Err(Error::InvalidInput(format!(
                "circle needs at least 3 segments, got {segments}"
            )));
        }
        let points = (0..segments)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / segments as f64;
                [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
            })
            .collect();
        Self::new(points, orientation)
    }

    /// Axis-aligned rectangle traced counterclockwise for orientation +1.
    pub fn rectangle(min: [f64; 2], max: [f64; 2], orientation: i8) -> Result<Self> {
        if min[0] >= max[0] || min[1] >= max[1] {
            return Err(Error::InvalidInput(format!(
                "degenerate rectangle [{}, {}] x [{}, {}]",
                min[0], max[0], min[1], max[1]
            )));
        }
        Self::new(
            vec![
                [min[0], min[1]],
                [max[0], min[1]],
                [max[0], max[1]],
                [min[0], max[1]],
            ],
            orientation,
        )
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Same physical curve: point order reversed and the sign flipped.
    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self {
            points,
            orientation: -self.orientation,
            closed: self.closed,
        }
    }

    /// Opposite orientation on the same vertex list.
    pub fn opposite(&self) -> Self {
        Self {
            points: self.points.clone(),
            orientation: -self.orientation,
            closed: self.closed,
        }
    }

    /// Rigid translation by (dx, dy).
    pub fn translated(&self, dx: f64, dy: f64) -> Self {
        Self {
            points: self.points.iter().map(|p| [p[0] + dx, p[1] + dy]).collect(),
            orientation: self.orientation,
            closed: self.closed,
        }
    }
}

/// Kernel regularization length and segments-per-edge quadrature count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveEnergyParams {
    epsilon: f64,
    quadrature: usize,
}

impl CurveEnergyParams {
    pub fn new(epsilon: f64, quadrature: usize) -> Result<Self> {
        if !epsilon.is_finite() || epsilon <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "kernel regularization must be a positive real, got {epsilon}"
            )));
        }
        if quadrature < 1 {
            return Err(Error::InvalidInput(
                "quadrature must subdivide each edge at least once".into(),
            ));
        }
        Ok(Self {
            epsilon,
            quadrature,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn quadrature(&self) -> usize {
        self.quadrature
    }
}

impl Default for CurveEnergyParams {
    /// epsilon = 0.05 curve units, one node per edge.
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            quadrature: 1,
        }
    }
}

/// One quadrature node: midpoint position and oriented length element.
#[derive(Debug, Clone, Copy)]
struct Node {
    pos: [f64; 2],
    dl: [f64; 2],
}

fn nodes_of(curve: &OrientedPolyline, quadrature: usize) -> Vec<Node> {
    let pts = curve.points();
    let sign = curve.orientation() as f64;
    let q = quadrature as f64;
    let mut nodes = Vec::with_capacity(pts.len() * quadrature);
    for k in 0..pts.len() {
        let a = pts[k];
        let b = pts[(k + 1) % pts.len()];
        let step = [(b[0] - a[0]) / q, (b[1] - a[1]) / q];
        for s in 0..quadrature {
            let t = s as f64 + 0.5;
            nodes.push(Node {
                pos: [a[0] + t * step[0], a[1] + t * step[1]],
                dl: [sign * step[0], sign * step[1]],
            });
        }
    }
    nodes
}

/// (1/8pi) * sum over ordered node pairs of dl.dl' / sqrt(r^2 + eps^2).
fn pairwise_energy(a: &[Node], b: &[Node], epsilon: f64) -> f64 {
    let eps_sq = epsilon * epsilon;
    let mut total = 0.0;
    for p in a {
        for q in b {
            let dot = p.dl[0] * q.dl[0] + p.dl[1] * q.dl[1];
            let dx = p.pos[0] - q.pos[0];
            let dy = p.pos[1] - q.pos[1];
            total += dot / (dx * dx + dy * dy + eps_sq).sqrt();
        }
    }
    total / (8.0 * std::f64::consts::PI)
}

/// Total elastic energy of a set of curves, self-pairs included.
pub fn curve_energy(curves: &[OrientedPolyline], params: &CurveEnergyParams) -> Result<f64> {
    let mut all = Vec::new();
    for c in curves {
        all.extend(nodes_of(c, params.quadrature));
    }
    Ok(pairwise_energy(&all, &all, params.epsilon))
}

/// Split the two-curve energy into (self1, self2, interaction); the three
/// terms sum to `curve_energy([c1, c2])`.
pub fn pair_decompose(
    c1: &OrientedPolyline,
    c2: &OrientedPolyline,
    params: &CurveEnergyParams,
) -> Result<(f64, f64, f64)> {
    let n1 = nodes_of(c1, params.quadrature);
    let n2 = nodes_of(c2, params.quadrature);
    let self1 = pairwise_energy(&n1, &n1, params.epsilon);
    let self2 = pairwise_energy(&n2, &n2, params.epsilon);
    // Ordered cross pairs come in both directions and the kernel is
    // symmetric, hence the factor 2.
    let interaction = 2.0 * pairwise_energy(&n1, &n2, params.epsilon);
    Ok((self1, self2, interaction))
}

/// Normal-direction speed induced at `at` by the curves:
/// (1/4pi) * sum (r . n_curve) |dl| / (r^2 + eps^2)^(3/2),
/// positive meaning motion along the supplied unit normal.
pub fn curve_force(
    curves: &[OrientedPolyline],
    at: [f64; 2],
    normal: [f64; 2],
    params: &CurveEnergyParams,
) -> Result<f64> {
    if !at[0].is_finite() || !at[1].is_finite() {
        return Err(Error::InvalidInput(format!(
            "evaluation point ({}, {}) is not finite",
            at[0], at[1]
        )));
    }
    let norm = normal[0].hypot(normal[1]);
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-6 {
        return Err(Error::InvalidInput(format!(
            "normal ({}, {}) must be a unit vector",
            normal[0], normal[1]
        )));
    }

    let eps_sq = params.epsilon * params.epsilon;
    let mut total = 0.0;
    for c in curves {
        for node in nodes_of(c, params.quadrature) {
            let rx = at[0] - node.pos[0];
            let ry = at[1] - node.pos[1];
            // Oriented normal element of the source curve: dl rotated a
            // quarter turn, which carries |dl| with it.
            let nx = -node.dl[1];
            let ny = node.dl[0];
            let dist_sq = rx * rx + ry * ry + eps_sq;
            total += (rx * nx + ry * ny) / (dist_sq * dist_sq.sqrt());
        }
    }
    Ok(total / (4.0 * std::f64::consts::PI))
}
