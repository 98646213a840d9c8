//! Without its relation `Te = β :he:` the odd lattice presentation is not a
//! Lie conformal algebra; the Jacobi residual is a multiple of the relation.

use conformal_calc::algebras::{make, BuiltinId};
use conformal_calc::verify::{on_worker, verify_algebra};

fn main() {
    let spec = make(&BuiltinId::Lattice { beta: 3 }).expect("builtin");
    on_worker(|| {
        for (label, s) in [("free", spec.without_relations()), ("with relations", spec.clone())] {
            let checks = verify_algebra(&s).expect("engine");
            println!("{} ({} checks)", label, checks.len());
            for c in checks.iter().filter(|c| !c.passed()) {
                println!("  FAIL {}: {}", c.name, c.residual.render(&s.generators));
            }
        }
    });
}
