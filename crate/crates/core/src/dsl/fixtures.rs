//! Built-in example systems, as `.gsys` source text.

use std::fmt::Write;

pub const HEISENBERG: &str = include_str!("../../fixtures/heisenberg.gsys");

const CHECK_ALL: &str = "check structure jacobi projectible master lift forms observables;\n";

/// Contact structure on R^{2n+1} with Reeb field as gauge generator.
pub fn contact(n: usize) -> String {
    let idx: Vec<usize> = (1..=n).collect();
    let join = |f: &dyn Fn(usize) -> String, sep: &str| idx.iter().map(|&i| f(i)).collect::<Vec<_>>().join(sep);
    let mut s = format!("# Contact manifold of dimension {}.\n", 2 * n + 1);
    let qs = join(&|i| format!("q{i}"), " ");
    let ps = join(&|i| format!("p{i}"), " ");
    writeln!(s, "coords t {qs} {ps};\n").unwrap();
    writeln!(s, "gauge R = d/dt;").unwrap();
    writeln!(s, "bivector P = {};", join(&|i| format!("wedge(d/dq{i} + p{i}*d/dt, d/dp{i})"), " + ")).unwrap();
    writeln!(s, "dynamics V = {};\n", join(&|i| format!("q{i}*d/dq{i} - p{i}*d/dp{i}"), " + ")).unwrap();
    writeln!(s, "form theta = dt - {};", join(&|i| format!("p{i}*dq{i}"), " - ")).unwrap();
    writeln!(s, "-({});\n", join(&|i| format!("p{i}*q{i}"), " + ")).unwrap();
    s.push_str("bounds max_res = 3, deg = 3;\n");
    s.push_str(CHECK_ALL);
    s
}

/// Invertible upper triangular n×n matrices, gauged by the left-invariant
/// fields of the strictly upper triangular part.
pub fn triangular(n: usize) -> String {
    let g = |i: usize, j: usize| format!("g{i}{j}");
    // left-invariant field of the matrix unit E_kl
    let field = |k: usize, l: usize| (1..=k).map(|i| format!("{}*d/d{}", g(i, k), g(i, l))).collect::<Vec<_>>().join(" + ");
    let mut s = format!("# Upper triangular {n}x{n} matrices.\n");
    let coords: Vec<String> = (1..=n).flat_map(|i| (i..=n).map(move |j| g(i, j))).collect();
    writeln!(s, "coords {};\n", coords.join(" ")).unwrap();
    for i in 1..=n {
        writeln!(s, "vector e{i} = {};", field(i, i)).unwrap();
    }
    for k in 1..=n {
        for l in k + 1..=n {
            writeln!(s, "gauge R{k}{l} = {};", field(k, l)).unwrap();
        }
    }
    if n >= 2 {
        writeln!(s, "bivector P = wedge(e1, e2);").unwrap();
    }
    let v = (1..=n).map(|k| field(k, n)).collect::<Vec<_>>().join(" + ");
    writeln!(s, "dynamics V = {v};\n").unwrap();
    s.push_str("bounds max_res = 3, deg = 3;\n");
    s.push_str("check structure jacobi projectible;\n");
    s
}

/// Fixture text by name: `heisenberg`, `contact`, `contact-N`,
/// `triangular`, `triangular-N`.
pub fn source(name: &str) -> Option<String> {
    let (base, n) = match name.split_once('-') {
        Some((b, n)) => (b, Some(n.parse::<usize>().ok().filter(|n| (1..=9).contains(n))?)),
        None => (name, None),
    };
    match (base, n) {
        ("heisenberg", None) => Some(HEISENBERG.to_string()),
        ("contact", n) => Some(contact(n.unwrap_or(1))),
        ("triangular", n) => Some(triangular(n.unwrap_or(3).max(2))),
        _ => None,
    }
}

pub const NAMES: &[&str] = &["heisenberg", "contact-N", "triangular-N"];
