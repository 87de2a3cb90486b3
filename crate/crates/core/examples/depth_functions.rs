//! Depth of a few probe locations under every depth function, for a
//! Gaussian cloud with a handful of far outliers.

use modeloc::depth::{depth_all, depth_at, DepthKind, DepthMethod};
use modeloc::{PointSet, RngStream};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn main() -> modeloc::Result<()> {
    let mut r = RngStream::new(1, 0).rng();
    let mut xy: Vec<[f64; 2]> = (0..200)
        .map(|_| [StandardNormal.sample(&mut r), StandardNormal.sample(&mut r)])
        .collect();
    for _ in 0..10 {
        xy.push([r.random_range(8.0..12.0), r.random_range(-12.0..-8.0)]);
    }
    let points = PointSet::from_xy(&xy)?;
    let probes: [(&str, [f64; 2]); 4] = [
        ("origin", [0.0, 0.0]),
        ("one sigma", [1.0, 0.0]),
        ("three sigma", [0.0, 3.0]),
        ("outlier blob", [10.0, -10.0]),
    ];

    print!("{:<12}", "depth");
    for (name, _) in &probes {
        print!(" {name:>13}");
    }
    println!(" {:>16}", "deepest sample");
    let rng = RngStream::new(2, 0);
    for kind in DepthKind::ALL {
        let m = DepthMethod::new(kind);
        print!("{:<12}", kind.name());
        for (_, q) in &probes {
            print!(" {:>13.4}", depth_at(q, &points, m, &rng)?);
        }
        let i = depth_all(&points, m, &rng)?.argmax();
        let p = points.point(i);
        println!("   ({:>5.2}, {:>5.2})", p[0], p[1]);
    }
    Ok(())
}
