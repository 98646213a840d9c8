//! Closed forms of the degree-`d` polynomial `P` and the hef system they solve.

use conformal_calc::cli::render_p;
use conformal_calc::pfamily::{build_p, check_hef_system, PForm};
use conformal_calc::terms::scalar::{factorial, int};

fn main() {
    for d in 1..=4 {
        for beta in [int(-1), int(d as i64 + 1)] {
            let alpha = int(1) / &beta;
            let schur = build_p(&PForm::Schur, d, &beta, &int(1)).expect("schur");
            let power = build_p(&PForm::Power, d, &beta, &(int(1) / factorial(d))).expect("power");
            let solved = check_hef_system(&power, &alpha).iter().all(|r| r.is_zero());
            println!("d = {}, beta = {}: {}", d, beta, render_p(&power));
            println!("  schur form agrees: {}, hef system at alpha = {}: {}", schur == power, alpha, solved);
        }
    }
}
