use sha2::{Digest, Sha256};

use crate::engine::{AlgebraSpec, Grading, RawPoly};
use crate::terms::scalar::format_scalar;
use crate::terms::{render_lambda, LambdaPoly, Monomial};

fn raw_text(p: &RawPoly, spec: &AlgebraSpec) -> String {
    let mut lp = LambdaPoly::zero();
    for (n, w, c) in p.iter() {
        lp.add_term(n, Monomial::from_factors(w.to_vec()), c.clone());
    }
    render_lambda(&lp, &spec.generators)
}

/// Canonical text of a spec; [`super::load`] reads it back to an equal spec.
pub fn print(spec: &AlgebraSpec) -> String {
    let mut out = format!("algebra {} {{\n", spec.name);
    out.push_str(&format!("  mode {};\n", spec.mode().as_str()));
    if spec.grading == Grading::Filtered {
        out.push_str("  grading filtered;\n");
    }
    for (n, v) in &spec.params {
        out.push_str(&format!("  param {} = {};\n", n, format_scalar(v)));
    }
    for g in &spec.generators {
        out.push_str(&format!("  gen {} parity {} weight {};\n", g.name, g.parity, format_scalar(&g.weight)));
    }
    for (&(a, b), v) in &spec.table.entries {
        let (na, nb) = (&spec.generators[a].name, &spec.generators[b].name);
        out.push_str(&format!("  bracket {} {} = {};\n", na, nb, raw_text(v, spec)));
    }
    for r in &spec.relations {
        let lhs = RawPoly::term(0, vec![r.lhs], num_traits::One::one());
        out.push_str(&format!("  relation {} -> {};\n", raw_text(&lhs, spec), raw_text(&r.rhs, spec)));
    }
    out.push_str("}\n");
    out
}

/// Hex SHA-256 of the canonical text.
pub fn digest(spec: &AlgebraSpec) -> String {
    hex::encode(Sha256::digest(print(spec).as_bytes()))
}
