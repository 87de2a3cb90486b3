//! Hartigan's dip statistic and its Monte-Carlo calibrated p-value.

use super::{TestKind, TestResult};
use crate::error::{Error, Result};
use crate::rng::RngStream;
use rand_distr::{Distribution, Exp1};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_BOOTSTRAP: usize = 2000;

/// Stream used by callers that want calibration tables shared across calls.
pub const CALIBRATION_STREAM: RngStream = RngStream::new(0x0D1F_7AB1_E5EE_D5ED, 0);

/// Dip of sorted values: the sup-distance between the empirical CDF and the
/// nearest unimodal CDF. Lies in `[1/(2n), 1/4]`.
pub fn dip_statistic(values: &[f64]) -> Result<f64> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if values.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::UnsortedInput);
    }
    if n < 4 {
        return Ok(0.5 / n as f64);
    }
    Ok(dip_sorted(values))
}

/// Greatest-convex-minorant / least-concave-majorant cycling of Hartigan &
/// Hartigan (1985), AS 217, working in units of `1/(2n)` until the end.
fn dip_sorted(xs: &[f64]) -> f64 {
    let n = xs.len();
    // One-based views keep the index arithmetic of the classic algorithm.
    let x = |i: usize| xs[i - 1];
    let mut dip = 1.0f64;
    if x(n) == x(1) {
        return dip / (2 * n) as f64;
    }
    let mut mn = vec![0usize; n + 1];
    let mut mj = vec![0usize; n + 1];
    let mut gcm = vec![0usize; n + 2];
    let mut lcm = vec![0usize; n + 2];

    mn[1] = 1;
    for j in 2..=n {
        mn[j] = j - 1;
        loop {
            let mnj = mn[j];
            let mnmnj = mn[mnj];
            if mnj == 1
                || (x(j) - x(mnj)) * ((mnj - mnmnj) as f64) < (x(mnj) - x(mnmnj)) * ((j - mnj) as f64)
            {
                break;
            }
            mn[j] = mnmnj;
        }
    }
    mj[n] = n;
    for k in (1..n).rev() {
        mj[k] = k + 1;
        loop {
            let mjk = mj[k];
            let mjmjk = mj[mjk];
            if mjk == n
                || (x(k) - x(mjk)) * (mjk as f64 - mjmjk as f64)
                    < (x(mjk) - x(mjmjk)) * (k as f64 - mjk as f64)
            {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    let mut low = 1usize;
    let mut high = n;
    loop {
        // Change points of the convex minorant from high down to low.
        let mut ic = 1;
        gcm[1] = high;
        while gcm[ic] > low {
            let i = gcm[ic];
            ic += 1;
            gcm[ic] = mn[i];
        }
        let l_gcm = ic;
        let mut ig = l_gcm;

        // Change points of the concave majorant from low up to high.
        ic = 1;
        lcm[1] = low;
        while lcm[ic] < high {
            let i = lcm[ic];
            ic += 1;
            lcm[ic] = mj[i];
        }
        let l_lcm = ic;
        let mut ih = l_lcm;

        // Largest distance between the two hulls on [low, high].
        let mut d = 0.0f64;
        if l_gcm != 2 || l_lcm != 2 {
            let mut ix = ig - 1;
            let mut iv = 2;
            loop {
                let gcmix = gcm[ix];
                let lcmiv = lcm[iv];
                if gcmix > lcmiv {
                    let gcmi1 = gcm[ix + 1];
                    let dx = (lcmiv as f64 - gcmi1 as f64 + 1.0)
                        - (x(lcmiv) - x(gcmi1)) * (gcmix as f64 - gcmi1 as f64)
                            / (x(gcmix) - x(gcmi1));
                    iv += 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    let lcmiv1 = lcm[iv - 1];
                    let dx = (x(gcmix) - x(lcmiv1)) * (lcmiv as f64 - lcmiv1 as f64)
                        / (x(lcmiv) - x(lcmiv1))
                        - (gcmix as f64 - lcmiv1 as f64 - 1.0);
                    ix -= 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if ix < 1 {
                    ix = 1;
                }
                if iv > l_lcm {
                    iv = l_lcm;
                }
                if gcm[ix] == lcm[iv] {
                    break;
                }
            }
        } else {
            d = 1.0;
        }
        if d < dip {
            break;
        }

        // Dip of the convex minorant left of the modal interval.
        let mut dip_l = 0.0f64;
        for j in ig..l_gcm {
            let mut max_t = 1.0f64;
            let jb = gcm[j + 1];
            let je = gcm[j];
            if je - jb > 1 && x(je) != x(jb) {
                let c = (je - jb) as f64 / (x(je) - x(jb));
                for jj in jb..=je {
                    let t = (jj - jb + 1) as f64 - (x(jj) - x(jb)) * c;
                    if max_t < t {
                        max_t = t;
                    }
                }
            }
            if dip_l < max_t {
                dip_l = max_t;
            }
        }
        // Dip of the concave majorant right of it.
        let mut dip_u = 0.0f64;
        for j in ih..l_lcm {
            let mut max_t = 1.0f64;
            let jb = lcm[j];
            let je = lcm[j + 1];
            if je - jb > 1 && x(je) != x(jb) {
                let c = (je - jb) as f64 / (x(je) - x(jb));
                for jj in jb..=je {
                    let t = (x(jj) - x(jb)) * c - (jj as f64 - jb as f64 - 1.0);
                    if max_t < t {
                        max_t = t;
                    }
                }
            }
            if dip_u < max_t {
                dip_u = max_t;
            }
        }
        let dipnew = dip_u.max(dip_l);
        if dip < dipnew {
            dip = dipnew;
        }
        if low == gcm[ig] && high == lcm[ih] {
            break;
        }
        low = gcm[ig];
        high = lcm[ih];
    }
    dip / (2 * n) as f64
}

type TableKey = (usize, usize, RngStream);
type TableCell = Arc<OnceLock<Arc<Vec<f64>>>>;

fn table_cache() -> &'static Mutex<HashMap<TableKey, TableCell>> {
    static CACHE: OnceLock<Mutex<HashMap<TableKey, TableCell>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sorted dips of `n_boot` uniform samples of size `n`, built once per key.
pub fn reference_table(n: usize, n_boot: usize, calibration: &RngStream) -> Arc<Vec<f64>> {
    let cell = {
        let mut cache = table_cache().lock().expect("dip cache poisoned");
        cache
            .entry((n, n_boot, *calibration))
            .or_insert_with(|| Arc::new(OnceLock::new()))
            .clone()
    };
    cell.get_or_init(|| {
        let base = calibration.derive(n as u64);
        // Built serially: a parallel build here could let the work-stealing
        // pool re-enter this same cell from a nested task.
        let mut buf = vec![0.0f64; n];
        let mut dips: Vec<f64> = (0..n_boot)
            .map(|b| {
                // Partial sums of exponentials are distributed as sorted
                // uniforms up to scale, and the dip is scale-free.
                let mut r = base.derive(b as u64).rng();
                let mut s = 0.0;
                for v in buf.iter_mut() {
                    let e: f64 = Exp1.sample(&mut r);
                    s += e;
                    *v = s;
                }
                dip_sorted(&buf)
            })
            .collect();
        dips.sort_by(f64::total_cmp);
        Arc::new(dips)
    })
    .clone()
}

/// Dip test of unimodality. The p-value is the fraction of uniform reference
/// samples of the same size whose dip is at least the observed one.
pub fn dip_test(values: &[f64], calibration: &RngStream, n_boot: usize) -> Result<TestResult> {
    let n = values.len();
    if n < 4 {
        return Err(Error::InsufficientSamples { needed: 4, got: n });
    }
    if n_boot == 0 {
        return Err(Error::BadParameter("n_boot must be at least 1".into()));
    }
    if let Some(i) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(dip_test_sorted(&sorted, calibration, n_boot))
}

/// `dip_test` for finite, ascending input of length at least 4.
pub(crate) fn dip_test_sorted(sorted: &[f64], calibration: &RngStream, n_boot: usize) -> TestResult {
    let dip = dip_sorted(sorted);
    TestResult {
        statistic: dip,
        p_value: p_from_table(dip, &reference_table(sorted.len(), n_boot, calibration)),
        method: TestKind::Dip,
    }
}

fn p_from_table(dip: f64, table: &[f64]) -> f64 {
    let below = table.partition_point(|v| *v < dip);
    (table.len() - below) as f64 / table.len() as f64
}
