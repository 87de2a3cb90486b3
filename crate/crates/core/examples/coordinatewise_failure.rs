//! Coordinate-wise median and mode against BRIL when the secondary clusters
//! line up with the main one along the axes.

use modeloc::bril::{bril, BootstrapMethod, BrilConfig};
use modeloc::depth::{DepthKind, DepthMethod};
use modeloc::points::{coordinate_wise_median, coordinate_wise_mode, euclidean, mean};
use modeloc::{PointSet, RngStream};
use rand_distr::{Distribution, Normal};

fn main() -> modeloc::Result<()> {
    let mut r = RngStream::new(8, 0).rng();
    let g = Normal::new(0.0, 1.0).unwrap();
    // Main cluster (30%) at the origin. Along each axis the other clusters
    // put more mass at 12 than the main one has at 0, and the marginal
    // medians fall on the clusters at 6.
    let clusters: [([f64; 2], usize); 4] = [([0.0, 0.0], 150), ([6.0, 12.0], 120), ([12.0, 6.0], 120), ([12.0, 12.0], 110)];
    let mut xy = Vec::new();
    for (c, n) in clusters {
        for _ in 0..n {
            xy.push([c[0] + g.sample(&mut r), c[1] + g.sample(&mut r)]);
        }
    }
    let points = PointSet::from_xy(&xy)?;
    let truth = [0.0, 0.0];

    let cfg = BrilConfig::new(BootstrapMethod::depth(DepthMethod::new(DepthKind::Projection)));
    let est = bril(&points, &cfg, &RngStream::new(9, 0))?;
    let rows = [
        ("mean", mean(&points)),
        ("cw-median", coordinate_wise_median(&points)),
        ("cw-mode (bin 1)", coordinate_wise_mode(&points, 1.0)?),
        ("bril:projection", est.center.clone()),
    ];
    for (name, c) in rows {
        println!("{name:<16} ({:>6.2}, {:>6.2})  error {:>6.3}", c[0], c[1], euclidean(&c, &truth));
    }
    Ok(())
}
