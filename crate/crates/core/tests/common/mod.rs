#![allow(dead_code)]

use fraclim::FuncExpr;

/// Thirty functions with their base points: polynomials up to degree 5,
/// trigonometric and exponential terms, and shifted centers.
pub const THEOREM_CORPUS: &[(&str, f64)] = &[
    ("pow(c=1,beta=0) + pow(c=1,beta=1)", 0.0),
    ("pow(c=1,beta=2)", 0.0),
    ("pow(c=2,beta=0) + pow(c=3,beta=1) + pow(c=1,beta=2)", 0.0),
    ("pow(c=1,beta=3)", 0.0),
    ("pow(c=1,beta=0) + pow(c=1,beta=1) + pow(c=1,beta=2) + pow(c=1,beta=3)", 0.0),
    ("pow(c=0.5,beta=1) + pow(c=2,beta=3) + pow(c=1,beta=5)", 0.0),
    ("pow(c=1,beta=0) + pow(c=-1,beta=1) + pow(c=0.5,beta=2) + pow(c=0.25,beta=3) + pow(c=0.1,beta=4) + pow(c=0.05,beta=5)", 0.0),
    ("pow(c=3,beta=4) + pow(c=1,beta=5)", 0.0),
    ("pow(c=4,beta=0) + pow(c=1,beta=4)", 0.0),
    ("pow(c=1,beta=5)", 0.0),
    ("pow(c=1,x0=1,beta=0) + pow(c=1,x0=1,beta=1) + pow(c=1,x0=1,beta=2)", 1.0),
    ("pow(c=1,beta=2) + pow(c=1,beta=3)", 1.0),
    ("pow(c=1,x0=0.5,beta=3) + pow(c=2,x0=0.5,beta=1)", 0.5),
    ("pow(c=1,beta=0) + pow(c=1,beta=2)", -1.0),
    ("pow(c=1,beta=4)", 2.0),
    ("sin(c=1,w=1,phi=0)", 0.0),
    ("cos(c=1,w=1,phi=0)", 0.0),
    ("exp(c=1,lambda=1)", 0.0),
    ("sin(c=1,w=2,phi=0)", 0.0),
    ("cos(c=1,w=2,phi=0.5)", 0.0),
    ("exp(c=1,lambda=-1)", 0.0),
    ("sin(c=1,w=1,phi=0)", 1.0),
    ("exp(c=1,lambda=0.5)", -0.5),
    ("cos(c=1,w=1,phi=0)", 0.3),
    ("sin(c=1,w=1,phi=0) + cos(c=1,w=1,phi=0)", 0.0),
    ("exp(c=1,lambda=1) + pow(c=1,beta=2)", 0.0),
    ("sin(c=2,w=1,phi=0.3)", 0.0),
    ("exp(c=1,lambda=1) + exp(c=1,lambda=-1)", 0.0),
    ("sin(c=1,w=0.5,phi=1)", 0.2),
    ("pow(c=1,beta=3) + sin(c=1,w=1,phi=0)", 0.0),
];

pub const THEOREM_ALPHAS: &[f64] = &[0.25, 0.5, 0.75, 1.0, 1.3, 1.5, 2.0, 2.5, 3.0];

pub fn parse(s: &str) -> FuncExpr {
    s.parse().unwrap_or_else(|e| panic!("{s}: {e}"))
}

/// Twenty polynomial pairs centered at 0, degrees 0 through 3.
pub fn polynomial_pairs() -> Vec<(FuncExpr, FuncExpr)> {
    let coeffs: [&[f64]; 10] = [
        &[1.0],
        &[0.0, 1.0],
        &[2.0, -1.0],
        &[0.0, 0.0, 1.0],
        &[1.0, 1.0, 1.0],
        &[0.5, 0.0, -2.0],
        &[0.0, 0.0, 0.0, 1.0],
        &[1.0, -1.0, 0.5, 0.25],
        &[3.0, 0.0, 1.0, -1.0],
        &[0.0, 2.0, 0.0, 0.5],
    ];
    let mut out = Vec::new();
    for i in 0..coeffs.len() {
        for j in [i, (i + 3) % coeffs.len()] {
            out.push((
                FuncExpr::polynomial(0.0, coeffs[i]),
                FuncExpr::polynomial(0.0, coeffs[j]),
            ));
        }
    }
    out
}
