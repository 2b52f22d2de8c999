use std::collections::HashSet;

use rand::Rng;

use super::EonGraph;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist(&self, o: &Point) -> f64 {
        (self.x - o.x).hypot(self.y - o.y)
    }
}

/// True when `w` lies strictly inside the disk with diameter `uv`.
///
/// Thales: the angle uwv is obtuse exactly when w is inside the disk, i.e.
/// when (u - w) . (v - w) < 0. Points on the circle give a dot product of 0.
#[inline]
fn blocks(u: &Point, v: &Point, w: &Point) -> bool {
    (u.x - w.x) * (v.x - w.x) + (u.y - w.y) * (v.y - w.y) < 0.0
}

/// True iff no point of `others` lies strictly inside the disk whose
/// diameter is the segment `uv`.
pub fn gabriel_condition<'a, I>(u: &Point, v: &Point, others: I) -> bool
where
    I: IntoIterator<Item = &'a Point>,
{
    !others.into_iter().any(|w| blocks(u, v, w))
}

/// Samples `n_nodes` uniform points on a `width_km` x `height_km` rectangle and
/// links every Gabriel-adjacent pair. Link lengths are the rounded Euclidean
/// distance, at least 1 km.
pub fn generate_gabriel<R: Rng + ?Sized>(
    n_nodes: usize,
    width_km: f64,
    height_km: f64,
    n_slices: usize,
    rng: &mut R,
) -> EonGraph {
    assert!(n_nodes >= 2, "need at least two nodes");
    assert!(width_km > 0.0 && height_km > 0.0, "area must be positive");
    let mut seen = HashSet::with_capacity(n_nodes);
    let mut coords = Vec::with_capacity(n_nodes);
    while coords.len() < n_nodes {
        let p = Point::new(
            rng.random_range(0.0..width_km),
            rng.random_range(0.0..height_km),
        );
        if seen.insert((p.x.to_bits(), p.y.to_bits())) {
            coords.push(p);
        }
    }
    let links = gabriel_pairs(&coords);
    let mut g = EonGraph::new(coords, n_slices);
    for (a, b) in links {
        let len = g.coords[a].dist(&g.coords[b]).round().max(1.0) as u64;
        g.add_link(a, b, len);
    }
    g
}

/// All Gabriel-adjacent pairs `(a, b)` with `a < b`, in lexicographic order.
///
/// Blockers of `uv` must lie inside the disk, so only points whose x falls
/// within the disk's horizontal extent are tested; a sweep over the points
/// sorted by x finds them.
pub(crate) fn gabriel_pairs(pts: &[Point]) -> Vec<(usize, usize)> {
    let mut by_x: Vec<usize> = (0..pts.len()).collect();
    by_x.sort_by(|&a, &b| pts[a].x.total_cmp(&pts[b].x).then(a.cmp(&b)));
    let xs: Vec<f64> = by_x.iter().map(|&i| pts[i].x).collect();

    let mut out = Vec::new();
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            let (u, v) = (&pts[a], &pts[b]);
            let mx = 0.5 * (u.x + v.x);
            let r = 0.5 * u.dist(v);
            let start = xs.partition_point(|&x| x < mx - r);
            let blocked = by_x[start..]
                .iter()
                .take_while(|&&w| pts[w].x <= mx + r)
                .any(|&w| w != a && w != b && blocks(u, v, &pts[w]));
            if !blocked {
                out.push((a, b));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn condition_examples() {
        let u = Point::new(0.0, 0.0);
        let v = Point::new(2.0, 0.0);
        assert!(gabriel_condition(&u, &v, &[]));
        assert!(!gabriel_condition(&u, &v, &[Point::new(1.0, 0.1)]));
        assert!(gabriel_condition(&u, &v, &[Point::new(1.0, 1.0)]));
    }

    #[test]
    fn three_point_configuration() {
        let pts = [Point::new(0.0, 0.0), Point::new(2.0, 0.0), Point::new(1.0, 0.1)];
        assert_eq!(gabriel_pairs(&pts), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn two_nodes_one_link() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generate_gabriel(2, 1000.0, 1000.0, 16, &mut rng);
        assert_eq!(g.link_count(), 1);
        assert!(g.link(0).length_km >= 1);
        assert_eq!(g.occupied_total(), 0);
    }

    #[test]
    fn generated_graph_is_connected_and_seeded() {
        let g1 = generate_gabriel(60, 1000.0, 1000.0, 8, &mut ChaCha8Rng::seed_from_u64(11));
        let g2 = generate_gabriel(60, 1000.0, 1000.0, 8, &mut ChaCha8Rng::seed_from_u64(11));
        assert_eq!(g1.links(), g2.links());
        assert!(super::super::graph_stats(&g1).is_ok());
    }
}
