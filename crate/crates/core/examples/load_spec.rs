//! Loads an algebra from the text format and evaluates a few expressions.
//!
//! cargo run --example load_spec -- "[e _ :f f:]"

use conformal_calc::algebras::{load, print};
use conformal_calc::engine::Engine;
use conformal_calc::expr::parse_expr;
use conformal_calc::terms::render_lambda;
use conformal_calc::verify::on_worker;

const SPEC: &str = include_str!("r_minus_one_d2.spec");

fn main() {
    let spec = load(SPEC).expect("valid spec");
    print!("{}", print(&spec));
    let mut exprs = vec!["[e _ f]".to_string(), "[h _ :e f:]".to_string(), "[T e _ f]".to_string()];
    exprs.extend(std::env::args().skip(1));
    on_worker(move || {
        let eng = Engine::new(spec);
        for text in &exprs {
            match parse_expr(text).map_err(|e| e.to_string()).and_then(|e| eng.eval(&e).map_err(|e| e.to_string())) {
                Ok(p) => println!("{} = {}", text, render_lambda(&p, eng.gens())),
                Err(e) => println!("{}: {}", text, e),
            }
        }
    });
}
