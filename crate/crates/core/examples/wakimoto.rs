//! Free field realization: the Fock space identities, the maps π_n, and the
//! kernel witness `(T-h)^{d+1} vac - (d+1) :ef:`.
//!
//! cargo run --example wakimoto -- 2

use conformal_calc::verify::on_worker;
use conformal_calc::wakimoto::{check_lemma, check_pi, kernel_witness};

fn main() {
    let d: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    on_worker(|| {
        let lemma = check_lemma(d + 1).expect("engine");
        let bad = lemma.iter().filter(|c| !c.passed()).count();
        println!("{} Fock space identities, {} failed", lemma.len(), bad);
        for n in 0..=d {
            for c in [check_pi(d, n), kernel_witness(d, n)] {
                let c = c.expect("engine");
                println!("{} {}", if c.passed() { "PASS" } else { "FAIL" }, c.name);
            }
        }
    });
}
