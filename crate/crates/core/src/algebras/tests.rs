use num_traits::One;

use super::*;
use crate::engine::Engine;
use crate::terms::scalar::rat;
use crate::terms::render_lambda;

fn ef(spec: &AlgebraSpec) -> String {
    let eng = Engine::new(spec.clone());
    let p = eng.bracket(&eng.gen_state("e").unwrap(), &eng.gen_state("f").unwrap()).unwrap();
    render_lambda(&p, eng.gens())
}

#[test]
fn r_minus_one_brackets() {
    let s1 = make(&BuiltinId::RMinusOne { d: 1, delta_e: None }).unwrap();
    assert_eq!(ef(&s1), "L - :h:");
    let s2 = make(&BuiltinId::RMinusOne { d: 2, delta_e: None }).unwrap();
    assert_eq!(ef(&s2), "L^2 - 2 L :h: - :T^1 h: + :h h:");
    assert_eq!(s2.generators[E].weight, rat(3, 2));
    let s = make(&BuiltinId::RMinusOne { d: 3, delta_e: Some(int(1)) }).unwrap();
    assert_eq!((s.generators[E].weight.clone(), s.generators[F].weight.clone()), (int(1), int(3)));
    assert!(make(&BuiltinId::RMinusOne { d: 0, delta_e: None }).is_err());
    assert!(make(&BuiltinId::RMinusOne { d: 2, delta_e: Some(int(4)) }).is_err());
}

#[test]
fn critical_level_current_is_rescaled_r_minus_one() {
    let cur = make(&BuiltinId::CurrentSl2 { k: int(-2) }).unwrap();
    let r = make(&BuiltinId::RMinusOne { d: 1, delta_e: None }).unwrap();
    assert!(same_presentation(&cur, &rescale_generator(&r, E, &int(-2))));
    assert!(!same_presentation(&cur, &r));
}

#[test]
fn lattice_parities_weights_and_relations() {
    let s = make(&BuiltinId::Lattice { beta: 2 }).unwrap();
    assert_eq!(s.generators[E].parity, Parity::Even);
    assert_eq!(s.generators[E].weight, int(1));
    let s = make(&BuiltinId::Lattice { beta: 3 }).unwrap();
    assert_eq!(s.generators[F].parity, Parity::Odd);
    assert_eq!(s.relations.len(), 2);
    // [e_λ f] = S_2(λ + 3h, 3Th/2)
    assert_eq!(ef(&s), "1/2 L^2 + 3 L :h: + 3/2 :T^1 h: + 9/2 :h h:");
    assert!(make(&BuiltinId::Lattice { beta: 0 }).is_err());
}

#[test]
fn builtins_are_deterministic() {
    let a = make(&BuiltinId::Lattice { beta: 4 }).unwrap();
    let b = make(&BuiltinId::Lattice { beta: 4 }).unwrap();
    assert_eq!(a, b);
    assert_eq!(digest(&a), digest(&b));
}

#[test]
fn print_then_load_is_identity() {
    let ids = [
        BuiltinId::CurrentSl2 { k: rat(-1, 3) },
        BuiltinId::RMinusOne { d: 3, delta_e: None },
        BuiltinId::RMinusOneGeneric { p: parse_lambda_poly("L^3 + 2 L").unwrap() },
        BuiltinId::Lattice { beta: 3 },
        BuiltinId::FreeBoson { alpha: int(2) },
        BuiltinId::Fock,
    ];
    for id in ids {
        let s = make(&id).unwrap();
        let text = print(&s);
        let back = load(&text).unwrap_or_else(|e| panic!("{}\n{}", text, e));
        assert_eq!(back, s, "{}", text);
        assert_eq!(print(&back), text);
    }
}

const R2: &str = "
# the d = 2 case
algebra r_minus_one {
  mode quantum;
  param alpha = -1;
  param d = 2;
  gen h parity even weight 1;
  gen e parity even weight 3/2;
  gen f parity even weight 3/2;
  bracket h h = alpha * L;
  bracket h e = e;
  bracket h f = -f;
  bracket e e = 0;
  bracket f f = 0;
  bracket e f = L^2 - 2 L h - T h + :h h:;
}
";

#[test]
fn hand_written_text_matches_builtin() {
    let s = load(R2).unwrap();
    assert_eq!(s, make(&BuiltinId::RMinusOne { d: 2, delta_e: None }).unwrap());
}

#[test]
fn load_errors() {
    let bad_weight = R2.replace("bracket e f = L^2", "bracket e f = L^3");
    match load(&bad_weight) {
        Err(SpecError::Validation(m)) => assert!(m.contains("bracket e f"), "{}", m),
        other => panic!("{:?}", other),
    }
    let empty = "algebra x { mode quantum; }";
    assert!(matches!(load(empty), Err(SpecError::Validation(_))));
    match load("algebra x {\n  gen h parity even weight 1\n}") {
        Err(SpecError::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("{:?}", other),
    }
    let missing = R2.replace("  bracket f f = 0;\n", "");
    assert!(matches!(load(&missing), Err(SpecError::Validation(_))));
    let twice = R2.replace("bracket e e = 0;", "bracket e e = 0; bracket e e = 0;");
    assert!(matches!(load(&twice), Err(SpecError::Validation(_))));
    let reserved = R2.replace("gen h parity", "gen L parity");
    assert!(load(&reserved).is_err());
    let light = R2.replace("}\n", "  relation T e -> :h h:;\n}\n");
    assert!(matches!(load(&light), Err(SpecError::Validation(_))));
    let fine = R2.replace("}\n", "  relation T e -> :h f:;\n}\n");
    assert_eq!(load(&fine).unwrap().relations.len(), 1);
}

#[test]
fn inconsistent_skew_declarations_are_rejected() {
    let text = R2.replace("bracket f f = 0;", "bracket f f = 0; bracket e h = e;");
    assert!(matches!(load(&text), Err(SpecError::Validation(_))));
    let fine = R2.replace("bracket f f = 0;", "bracket f f = 0; bracket e h = -e;");
    assert!(load(&fine).is_ok());
}

#[test]
fn builtin_arguments() {
    let args = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>();
    assert_eq!(
        parse_builtin("r_minus_one", &args(&[("d", "3")])).unwrap(),
        BuiltinId::RMinusOne { d: 3, delta_e: None }
    );
    assert_eq!(
        parse_builtin("current_sl2", &args(&[("k", "-1/2")])).unwrap(),
        BuiltinId::CurrentSl2 { k: rat(-1, 2) }
    );
    let g = parse_builtin("r_minus_one_generic", &args(&[("p", "L^3+2*L")])).unwrap();
    assert_eq!(g, BuiltinId::RMinusOneGeneric { p: UPoly::new(vec![int(0), int(2), int(0), int(1)]) });
    assert!(parse_builtin("lattice", &args(&[("beta", "3/2")])).is_err());
    assert!(parse_builtin("lattice", &args(&[("d", "3")])).is_err());
    assert!(parse_builtin("nope", &[]).is_err());
}

#[test]
fn shape_detection_round_trips() {
    let s = make(&BuiltinId::Lattice { beta: 3 }).unwrap();
    let data = detect_hef(&s).unwrap();
    assert_eq!(data.alpha, rat(1, 3));
    assert_eq!(data.parity, Parity::Odd);
    let p = pfamily::build_p(&PForm::Schur, 2, &int(3), &Scalar::one()).unwrap();
    assert_eq!(data.p, p);
    assert!(matches!(detect_hef(&make(&BuiltinId::Fock).unwrap()), Err(ShapeError::ShapeMismatch(_))));
}
