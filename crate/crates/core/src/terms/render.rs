use num_traits::{One, Signed};

use super::scalar::format_scalar;
use super::{Generator, LambdaMuPoly, LambdaPoly, Monomial, Scalar, StateVector};

fn factor_text(g: &super::DerivedGenerator, gens: &[Generator]) -> String {
    let name = &gens[g.gen].name;
    if g.order == 0 {
        name.clone()
    } else {
        format!("T^{} {}", g.order, name)
    }
}

pub fn render_monomial(m: &Monomial, gens: &[Generator]) -> String {
    if m.is_vacuum() {
        return "vac".to_string();
    }
    let parts: Vec<String> = m.factors().iter().map(|g| factor_text(g, gens)).collect();
    format!(":{}:", parts.join(" "))
}

fn var_power(name: &str, n: u32) -> Option<String> {
    match n {
        0 => None,
        1 => Some(name.to_string()),
        _ => Some(format!("{}^{}", name, n)),
    }
}

/// One signed term; `vars` are already-rendered variable powers.
struct Term {
    key: (Scalar, String, Vec<u32>),
    coeff: Scalar,
    vars: Vec<String>,
    mono: Monomial,
}

fn join_terms(mut terms: Vec<Term>, gens: &[Generator]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms.sort_by(|a, b| a.key.cmp(&b.key));
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let neg = t.coeff.is_negative();
        let abs = t.coeff.abs();
        let mut parts: Vec<String> = Vec::new();
        let has_vars = !t.vars.is_empty();
        let vac = t.mono.is_vacuum();
        if !abs.is_one() {
            parts.push(format_scalar(&abs));
        }
        parts.extend(t.vars.iter().cloned());
        if !(vac && has_vars) {
            parts.push(render_monomial(&t.mono, gens));
        }
        let body = parts.join(" ");
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

pub fn render_state(v: &StateVector, gens: &[Generator]) -> String {
    let terms = v
        .iter()
        .map(|(m, c)| Term {
            key: (m.weight(gens), render_monomial(m, gens), Vec::new()),
            coeff: c.clone(),
            vars: Vec::new(),
            mono: m.clone(),
        })
        .collect();
    join_terms(terms, gens)
}

pub fn render_lambda(p: &LambdaPoly, gens: &[Generator]) -> String {
    let mut terms = Vec::new();
    for (n, v) in p.iter() {
        for (m, c) in v.iter() {
            terms.push(Term {
                key: (m.weight(gens), render_monomial(m, gens), vec![u32::MAX - n]),
                coeff: c.clone(),
                vars: var_power("L", n).into_iter().collect(),
                mono: m.clone(),
            });
        }
    }
    join_terms(terms, gens)
}

/// Lowest total degree in `(λ, μ)` first; μ is written `M`.
pub fn render_lambda_mu(p: &LambdaMuPoly, gens: &[Generator]) -> String {
    let mut blocks: Vec<((u32, u32), String)> = Vec::new();
    for ((a, b), v) in p.by_total_degree() {
        let mut terms = Vec::new();
        for (m, c) in v.iter() {
            terms.push(Term {
                key: (m.weight(gens), render_monomial(m, gens), Vec::new()),
                coeff: c.clone(),
                vars: var_power("L", a).into_iter().chain(var_power("M", b)).collect(),
                mono: m.clone(),
            });
        }
        blocks.push(((a, b), join_terms(terms, gens)));
    }
    if blocks.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (_, text)) in blocks.into_iter().enumerate() {
        if i == 0 {
            out.push_str(&text);
        } else if let Some(rest) = text.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&text);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::scalar::{int, rat};
    use super::super::{DerivedGenerator, Parity};
    use super::*;

    fn gens() -> Vec<Generator> {
        vec![Generator::new("h", Parity::Even, int(1)), Generator::new("e", Parity::Even, int(1))]
    }

    #[test]
    fn lambda_rendering_matches_expected_layout() {
        let h = DerivedGenerator::base(0);
        let mut p = LambdaPoly::zero();
        p.add_term(2, Monomial::vacuum(), int(1));
        p.add_term(1, Monomial::single(h), int(-2));
        p.add_term(0, Monomial::single(h.derive(1)), int(-1));
        p.add_term(0, Monomial::from_factors(vec![h, h]), int(1));
        assert_eq!(render_lambda(&p, &gens()), "L^2 - 2 L :h: - :T^1 h: + :h h:");
    }

    #[test]
    fn state_rendering() {
        let g = gens();
        assert_eq!(render_state(&StateVector::zero(), &g), "0");
        assert_eq!(render_state(&StateVector::vacuum(), &g), "vac");
        assert_eq!(render_state(&StateVector::scalar(rat(-3, 2)), &g), "-3/2 vac");
        let mut v = StateVector::generator(DerivedGenerator::new(1, 1));
        v.add_term(Monomial::from_factors(vec![DerivedGenerator::base(0), DerivedGenerator::base(1)]), int(-3));
        assert_eq!(render_state(&v, &g), ":T^1 e: - 3 :h e:");
    }
}
