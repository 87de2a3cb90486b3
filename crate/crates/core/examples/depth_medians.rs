//! Med, Max and Sup medians of a unit Gaussian at the middle of a 50×50
//! arena as uniform noise grows.
//!
//! ```text
//! cargo run --release --example depth_medians -- [reps]
//! ```

use modeloc::depth::{depth_median, DepthKind, DepthMethod, MedianMode};
use modeloc::points::euclidean;
use modeloc::synthgen::{generate, MixtureConfig};
use modeloc::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let reps: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(5);
    let noise = [0.0, 0.25, 0.5];
    let kinds = [DepthKind::Tukey, DepthKind::Spatial, DepthKind::Projection, DepthKind::Mahalanobis];
    let modes = [("med", MedianMode::Med), ("max", MedianMode::Max), ("sup", MedianMode::Sup(0.1))];

    print!("{:<20}", "estimator");
    for e in noise {
        print!(" {:>10}", format!("noise {e}"));
    }
    println!();
    for kind in kinds {
        for (label, mode) in modes {
            print!("{:<20}", format!("{label}:{}", kind.name()));
            for e in noise {
                let cfg = MixtureConfig::centered_single(500, e);
                let mut total = 0.0;
                for rep in 0..reps {
                    let inst = generate(&cfg, &RngStream::new(11, rep))?;
                    let c = depth_median(&inst.points, DepthMethod::new(kind), mode, &RngStream::new(12, rep))?;
                    total += euclidean(&c, inst.main_center());
                }
                print!(" {:>10.4}", total / reps as f64);
            }
            println!();
        }
    }
    Ok(())
}
