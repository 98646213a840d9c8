use crate::engine::{AlgebraSpec, Grading, Mode, Relation, SpecError};
use crate::expr::{to_raw, Expr, NameRef, Parser, Tok};
use crate::terms::{Parity, Scalar};

use super::checked;

enum Stmt {
    Mode(Mode),
    Grading(Grading),
    Param(String, Scalar),
    Gen(String, Parity, Scalar),
    Bracket(String, String, Expr, (usize, usize)),
    Relation(Expr, Expr, (usize, usize)),
}

fn keyword(p: &mut Parser, options: &[&str]) -> Result<String, SpecError> {
    let w = p.expect_ident()?;
    if options.contains(&w.as_str()) {
        Ok(w)
    } else {
        let (line, column) = p.here();
        Err(SpecError::Parse { line, column, message: format!("expected one of {}, found `{}`", options.join("|"), w) })
    }
}

fn expect_word(p: &mut Parser, word: &str) -> Result<(), SpecError> {
    match p.peek() {
        Tok::Ident(s) if s == word => {
            p.advance();
            Ok(())
        }
        _ => p.error(format!("expected `{}`", word)),
    }
}

fn statement(p: &mut Parser) -> Result<Stmt, SpecError> {
    let at = p.here();
    let head = keyword(p, &["mode", "grading", "param", "gen", "bracket", "relation"])?;
    let s = match head.as_str() {
        "mode" => Stmt::Mode(match keyword(p, &["quantum", "classical"])?.as_str() {
            "quantum" => Mode::Quantum,
            _ => Mode::Classical,
        }),
        "grading" => Stmt::Grading(match keyword(p, &["graded", "filtered"])?.as_str() {
            "graded" => Grading::Graded,
            _ => Grading::Filtered,
        }),
        "param" => {
            let name = p.expect_ident()?;
            p.expect_sym('=')?;
            Stmt::Param(name, p.rational()?)
        }
        "gen" => {
            let name = p.expect_ident()?;
            expect_word(p, "parity")?;
            let parity = match keyword(p, &["even", "odd"])?.as_str() {
                "even" => Parity::Even,
                _ => Parity::Odd,
            };
            expect_word(p, "weight")?;
            Stmt::Gen(name, parity, p.rational()?)
        }
        "bracket" => {
            let a = p.expect_ident()?;
            let b = p.expect_ident()?;
            p.expect_sym('=')?;
            Stmt::Bracket(a, b, p.expr()?, at)
        }
        _ => {
            let lhs = p.expr()?;
            if *p.peek() != Tok::Arrow {
                return p.error("expected `->`");
            }
            p.advance();
            Stmt::Relation(lhs, p.expr()?, at)
        }
    };
    p.expect_sym(';')?;
    Ok(s)
}

/// Parses and validates a spec in the text format.
pub fn load(text: &str) -> Result<AlgebraSpec, SpecError> {
    let mut p = Parser::new(text)?;
    expect_word(&mut p, "algebra")?;
    let name = p.expect_ident()?;
    p.expect_sym('{')?;
    let mut stmts = Vec::new();
    while !p.at_sym('}') {
        if p.at_eof() {
            return p.error("expected `}`");
        }
        stmts.push(statement(&mut p)?);
    }
    p.advance();
    if !p.at_eof() {
        return p.error("unexpected input after the closing `}`");
    }

    let mut mode = Mode::Quantum;
    let mut grading = Grading::Graded;
    for s in &stmts {
        match s {
            Stmt::Mode(m) => mode = *m,
            Stmt::Grading(g) => grading = *g,
            _ => {}
        }
    }
    let mut spec = AlgebraSpec::new(name, mode);
    spec.grading = grading;
    for s in &stmts {
        match s {
            Stmt::Param(n, v) => {
                if spec.param(n).is_some() {
                    return Err(SpecError::Validation(format!("parameter `{}` declared twice", n)));
                }
                spec.set_param(n, v.clone());
            }
            Stmt::Gen(n, parity, w) => {
                spec.add_generator(n, *parity, w.clone());
            }
            _ => {}
        }
    }
    let resolver = |s: &str| -> Option<NameRef> {
        if let Some(g) = spec.generator_index(s) {
            Some(NameRef::Gen(g))
        } else {
            spec.param(s).map(|q| NameRef::Param(q.clone()))
        }
    };
    let mut entries = Vec::new();
    let mut relations = Vec::new();
    for s in &stmts {
        match s {
            Stmt::Bracket(a, b, e, (line, _)) => {
                let label = format!("bracket {} {} (line {})", a, b, line);
                let ia = spec
                    .generator_index(a)
                    .ok_or_else(|| SpecError::Validation(format!("{}: unknown generator `{}`", label, a)))?;
                let ib = spec
                    .generator_index(b)
                    .ok_or_else(|| SpecError::Validation(format!("{}: unknown generator `{}`", label, b)))?;
                let raw = to_raw(e, &resolver).map_err(|m| SpecError::Validation(format!("{}: {}", label, m)))?;
                entries.push((ia, ib, raw, label));
            }
            Stmt::Relation(l, r, (line, _)) => {
                let label = format!("relation (line {})", line);
                let err = |m: String| SpecError::Validation(format!("{}: {}", label, m));
                let lhs = to_raw(l, &resolver).map_err(err)?;
                let rhs = to_raw(r, &resolver).map_err(err)?;
                let mut it = lhs.iter();
                let (pow, word, c) = match (it.next(), it.next()) {
                    (Some(t), None) => t,
                    _ => return Err(err("left-hand side must be a single T^k g".into())),
                };
                if pow != 0 || word.len() != 1 {
                    return Err(err("left-hand side must be a single T^k g".into()));
                }
                relations.push(Relation { lhs: word[0], rhs: rhs.scaled(&(Scalar::from_integer(1.into()) / c)) });
            }
            _ => {}
        }
    }
    for (a, b, raw, label) in entries {
        if spec.table.entries.contains_key(&(a, b)) {
            return Err(SpecError::Validation(format!("{}: declared twice", label)));
        }
        spec.set_bracket(a, b, raw);
    }
    spec.relations = relations;
    checked(spec)
}
