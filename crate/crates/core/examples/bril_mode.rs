//! BRIL step by step on a mixture of a 400-sample main cluster, two
//! 200-sample clusters and 200 noise samples.
//!
//! ```text
//! cargo run --release --example bril_mode -- [seed] [method]
//! ```

use modeloc::bril::{bril, BootstrapMethod, BrilConfig};
use modeloc::eval::{error, Estimator};
use modeloc::synthgen::{generate, Label, MixtureConfig};
use modeloc::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let method = args.next().unwrap_or_else(|| "projection".into());
    let Estimator::Bril(kind) = format!("bril:{method}").parse()? else {
        unreachable!()
    };

    let inst = generate(&MixtureConfig::new(1000, 3, 0.2, 0.5), &RngStream::new(seed, 0))?;
    for (c, s) in inst.true_centers.iter().zip(&inst.sigmas) {
        println!("cluster at ({:>6.2}, {:>6.2}) sigma {s:.2}", c[0], c[1]);
    }

    let est = bril(&inst.points, &BrilConfig::new(BootstrapMethod::new(kind)), &RngStream::new(seed, 1))?;
    println!();
    for (g, diag) in est.all_groups.iter().zip(&est.diagnostics) {
        let main = g.members.as_slice().iter().filter(|&&i| inst.labels[i] == Label::Main).count();
        let noise = g.members.as_slice().iter().filter(|&&i| inst.labels[i] == Label::Noise).count();
        println!(
            "iteration {}: {} remaining, seed ({:.2}, {:.2}), unimodal {} -> {} kept, normal {} steps",
            diag.iteration,
            diag.remaining,
            diag.seed[0],
            diag.seed[1],
            if diag.unimodal_before { "at start" } else { "after trimming" },
            diag.unimodal_size,
            diag.normal_trace.len().saturating_sub(1)
        );
        println!(
            "    group of {} ({} main, {} noise) centered ({:.3}, {:.3}){}",
            g.members.len(),
            main,
            noise,
            g.center[0],
            g.center[1],
            if g.terminal { ", terminal" } else { "" }
        );
    }
    println!();
    println!(
        "selected group {} with {} samples, {} unassigned, error {:.4}",
        est.selected_index + 1,
        est.selected_group.members.len(),
        est.unassigned.len(),
        error(&est.center, inst.main_center())?
    );
    Ok(())
}
