//! Admissible `[e_λ f]` by degree, for nonzero and vanishing `[h_λ h]`.

use conformal_calc::cli::render_p;
use conformal_calc::pfamily::{alpha0_solve, classify_nonzero_alpha, SolutionKind};
use conformal_calc::verify::on_worker;

fn main() {
    for d in 1..=6 {
        println!("d = {}", d);
        for s in classify_nonzero_alpha(d) {
            let beta = s.beta.map_or("any".to_string(), |b| b.to_string());
            let kind = match s.kind {
                SolutionKind::RMinusOne => "r_minus_one",
                SolutionKind::Lattice => "lattice",
                SolutionKind::Current => "current",
                _ => "other",
            };
            println!("  beta = {:>3}  e {:?}  {}", beta, s.parity_e, kind);
        }
    }
    // α = 0: only the f-side and e-side conditions separately have solutions
    let sol = on_worker(|| alpha0_solve(2)).expect("engine");
    let show = |v: &[_]| v.iter().map(render_p).collect::<Vec<_>>().join(", ");
    println!("alpha = 0, d = 2");
    println!("  e side: {}", show(&sol.e_side));
    println!("  f side: {}", show(&sol.f_side));
    println!("  both:   {}", if sol.both.is_empty() { "none".into() } else { show(&sol.both) });
}
