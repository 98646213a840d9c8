//! Jacobi and skew-symmetry on every generator triple of a builtin algebra.
//!
//! cargo run --example verify_algebra -- 3

use conformal_calc::algebras::{make, BuiltinId};
use conformal_calc::verify::{on_worker, property_sweep, verify_algebra};

fn main() {
    let d: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let spec = make(&BuiltinId::RMinusOne { d, delta_e: None }).expect("builtin");
    on_worker(|| {
        let checks = verify_algebra(&spec).expect("engine");
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        println!("{}: {} checks, {} failed", spec.name, checks.len(), failed.len());
        for c in failed {
            println!("  {}: {}", c.name, c.residual.render(&spec.generators));
        }
        for p in property_sweep(&spec, 7, 5, 40).expect("engine") {
            println!("  property {:<16} {} cases, {} failures", p.name, p.cases, p.failures.len());
        }
    });
}
