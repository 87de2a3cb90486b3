//! Exact bivariate halfspace, simplicial and Oja depth via one angular sort
//! of the sample around the query point.

use std::cmp::Ordering;

/// Sign of `a.x * b.y - a.y * b.x`, exact for the given floating-point
/// inputs.
pub fn orient_sign(a: [f64; 2], b: [f64; 2]) -> i8 {
    let p = a[0] * b[1];
    let q = a[1] * b[0];
    let det = p - q;
    let bound = 8.0 * f64::EPSILON * (p.abs() + q.abs());
    if det > bound {
        return 1;
    }
    if det < -bound {
        return -1;
    }
    let ep = a[0].mul_add(b[1], -p);
    let eq = a[1].mul_add(b[0], -q);
    expansion_sign(&[p, ep, -q, -eq])
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

/// Exact sign of a sum of a few floats, via a nonoverlapping expansion.
fn expansion_sign(terms: &[f64]) -> i8 {
    let mut e: Vec<f64> = Vec::with_capacity(terms.len() * 2);
    for &t in terms {
        let mut q = t;
        let mut next = Vec::with_capacity(e.len() + 1);
        for &c in &e {
            let (s, err) = two_sum(q, c);
            if err != 0.0 {
                next.push(err);
            }
            q = s;
        }
        next.push(q);
        e = next;
    }
    match e.iter().rev().find(|v| **v != 0.0) {
        Some(v) if *v > 0.0 => 1,
        Some(_) => -1,
        None => 0,
    }
}

fn upper_half(v: [f64; 2]) -> bool {
    v[1] > 0.0 || (v[1] == 0.0 && v[0] > 0.0)
}

/// Counterclockwise order starting at the positive x axis. Vectors pointing
/// the same way compare equal.
fn angle_cmp(a: [f64; 2], b: [f64; 2]) -> Ordering {
    match (upper_half(a), upper_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => match orient_sign(a, b) {
            1 => Ordering::Less,
            -1 => Ordering::Greater,
            _ => Ordering::Equal,
        },
    }
}

/// The sample seen from a query point: vectors sharing a direction are
/// grouped, and each group knows how many samples lie strictly within the
/// open half-turn counterclockwise of it.
pub(crate) struct AngularView {
    /// Samples coinciding with the query.
    pub zeros: usize,
    pub sizes: Vec<usize>,
    /// Vector sum of each group.
    pub sums: Vec<[f64; 2]>,
    /// Number of samples strictly ahead (within less than a half-turn).
    pub ahead: Vec<usize>,
    /// Vector sum of the samples strictly ahead.
    pub ahead_sum: Vec<[f64; 2]>,
}

impl AngularView {
    pub fn new(query: &[f64], flat: &[f64], scratch: &mut Vec<[f64; 2]>) -> Self {
        scratch.clear();
        let mut zeros = 0;
        for p in flat.chunks_exact(2) {
            let v = [p[0] - query[0], p[1] - query[1]];
            if v[0] == 0.0 && v[1] == 0.0 {
                zeros += 1;
            } else {
                scratch.push(v);
            }
        }
        // Stable: equal directions keep sample order.
        scratch.sort_by(|a, b| angle_cmp(*a, *b));

        let mut dirs: Vec<[f64; 2]> = Vec::new();
        let mut sizes = Vec::new();
        let mut sums: Vec<[f64; 2]> = Vec::new();
        for &v in scratch.iter() {
            if let Some(last) = dirs.last() {
                if angle_cmp(*last, v) == Ordering::Equal {
                    let k = sizes.len() - 1;
                    sizes[k] += 1;
                    sums[k][0] += v[0];
                    sums[k][1] += v[1];
                    continue;
                }
            }
            dirs.push(v);
            sizes.push(1);
            sums.push(v);
        }

        let g = dirs.len();
        let mut cum_n = vec![0usize; 2 * g + 1];
        let mut cum_s = vec![[0.0f64; 2]; 2 * g + 1];
        for k in 0..2 * g {
            cum_n[k + 1] = cum_n[k] + sizes[k % g];
            cum_s[k + 1] = [cum_s[k][0] + sums[k % g][0], cum_s[k][1] + sums[k % g][1]];
        }
        let mut ahead = vec![0usize; g];
        let mut ahead_sum = vec![[0.0f64; 2]; g];
        let mut e = 0usize;
        for i in 0..g {
            e = e.max(i + 1);
            while e < i + g && orient_sign(dirs[i], dirs[e % g]) > 0 {
                e += 1;
            }
            ahead[i] = cum_n[e] - cum_n[i + 1];
            ahead_sum[i] = [
                cum_s[e][0] - cum_s[i + 1][0],
                cum_s[e][1] - cum_s[i + 1][1],
            ];
        }
        AngularView {
            zeros,
            sizes,
            sums,
            ahead,
            ahead_sum,
        }
    }

    fn moving(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Smallest number of samples in a closed halfplane whose boundary passes
    /// through the query.
    pub fn halfspace_count(&self) -> usize {
        let m = self.moving();
        let best_open = self
            .sizes
            .iter()
            .zip(&self.ahead)
            .map(|(s, a)| s + a)
            .max()
            .unwrap_or(0);
        self.zeros + m - best_open
    }

    /// Number of sample triples whose closed triangle misses the query.
    pub fn triangles_missing(&self) -> u128 {
        let mut total: u128 = 0;
        for (s, a) in self.sizes.iter().zip(&self.ahead) {
            for r in 0..*s {
                let k = (s - 1 - r + a) as u128;
                total += k * k.saturating_sub(1) / 2;
            }
        }
        total
    }

    /// Sum over sample pairs of twice the triangle area with the query.
    pub fn doubled_area_sum(&self) -> f64 {
        self.sums
            .iter()
            .zip(&self.ahead_sum)
            .map(|(s, w)| s[0] * w[1] - s[1] * w[0])
            .sum()
    }
}

fn choose2(n: usize) -> f64 {
    let n = n as f64;
    n * (n - 1.0) / 2.0
}

fn choose3(n: usize) -> u128 {
    let n = n as u128;
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

pub(crate) fn tukey(query: &[f64], flat: &[f64], scratch: &mut Vec<[f64; 2]>) -> f64 {
    let n = flat.len() / 2;
    let view = AngularView::new(query, flat, scratch);
    view.halfspace_count() as f64 / n as f64
}

pub(crate) fn simplicial(query: &[f64], flat: &[f64], scratch: &mut Vec<[f64; 2]>) -> f64 {
    let n = flat.len() / 2;
    let view = AngularView::new(query, flat, scratch);
    let total = choose3(n);
    if total == 0 {
        // Fewer than three samples: containment in the closed hull.
        return if n == 0 {
            0.0
        } else if view.zeros > 0 || in_closed_segment(&view) {
            1.0
        } else {
            0.0
        };
    }
    (total - view.triangles_missing()) as f64 / total as f64
}

fn in_closed_segment(view: &AngularView) -> bool {
    // Two nonzero vectors in opposite directions put the query between them.
    view.sizes.len() == 2 && view.ahead.iter().all(|a| *a == 0)
}

/// Mean area of the triangles formed by the query and a pair of samples.
pub(crate) fn oja_mean_area(query: &[f64], flat: &[f64], scratch: &mut Vec<[f64; 2]>) -> f64 {
    let n = flat.len() / 2;
    if n < 2 {
        return 0.0;
    }
    let view = AngularView::new(query, flat, scratch);
    0.5 * view.doubled_area_sum() / choose2(n)
}
