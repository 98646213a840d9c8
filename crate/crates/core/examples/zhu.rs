//! Zhu algebra presentations: the hef family at several weights of `e`, and
//! the even lattice where `[e,f]` is an odd polynomial in `h`.

use num_traits::Zero;

use conformal_calc::algebras::{make, BuiltinId};
use conformal_calc::terms::scalar::{int, rat};
use conformal_calc::verify::on_worker;
use conformal_calc::zhu::{lattice_polynomial, HamiltonianData, Zhu};

fn main() {
    on_worker(|| {
        for (d, de) in [(1, int(1)), (2, int(2)), (2, rat(1, 2)), (3, int(2))] {
            let spec = make(&BuiltinId::RMinusOne { d, delta_e: None }).expect("builtin");
            let ham = HamiltonianData::hef(&spec, &de).expect("hef shape");
            let zhu = Zhu::new(&spec, &ham).expect("zhu");
            println!("d = {}, weight of e = {}", d, de);
            for line in zhu.presentation().expect("presentation").lines() {
                println!("  {}", line);
            }
        }
        for beta in [2, 4] {
            let spec = make(&BuiltinId::Lattice { beta }).expect("builtin");
            let zhu = Zhu::new(&spec, &HamiltonianData::from_spec(&spec)).expect("zhu");
            println!("lattice beta = {}", beta);
            for line in zhu.presentation().expect("presentation").lines() {
                println!("  {}", line);
            }
            let terms: Vec<String> = lattice_polynomial(beta)
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| format!("({}) h^{}", c, k))
                .collect();
            println!("  closed form: {}", terms.join(" + "));
        }
    });
}
