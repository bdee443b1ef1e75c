//! CPLEX LP text export, for cross-checking against external solvers.

use std::fmt::Write as _;

use num_traits::{One, Signed};

use super::{LinearProgram, RowKind};
use crate::rational::{self, Rational};

fn term(out: &mut String, first: bool, coeff: &Rational, name: &str) {
    let sign = if coeff.is_negative() {
        "- "
    } else if first {
        ""
    } else {
        "+ "
    };
    let mag = coeff.abs();
    if mag.is_one() {
        let _ = write!(out, " {sign}{name}");
    } else {
        let _ = write!(out, " {sign}{} {name}", number(&mag));
    }
}

// LP files have no fraction syntax, so non-integers fall back to decimals.
fn number(r: &Rational) -> String {
    if r.is_integer() {
        rational::format(r)
    } else {
        format!("{:.12}", rational::to_f64(r))
    }
}

pub fn to_lp_format(lp: &LinearProgram) -> String {
    let mut out = String::from("\\ exact values are rational; decimals below are rounded\nMaximize\n obj:");
    if lp.objective.is_empty() {
        out.push_str(" 0");
    }
    for (k, (j, c)) in lp.objective.iter().enumerate() {
        term(&mut out, k == 0, c, &lp.var_names[*j]);
    }
    out.push_str("\nSubject To\n");
    for row in &lp.rows {
        let _ = write!(out, " {}:", row.name);
        for (k, (j, c)) in row.coeffs.iter().enumerate() {
            term(&mut out, k == 0, c, &lp.var_names[*j]);
        }
        let op = match row.kind {
            RowKind::Eq => "=",
            RowKind::Le => "<=",
        };
        let _ = writeln!(out, " {op} {}", number(&row.rhs));
    }
    out.push_str("Bounds\n");
    for (j, name) in lp.var_names.iter().enumerate() {
        match &lp.upper[j] {
            Some(u) => {
                let _ = writeln!(out, " 0 <= {name} <= {}", number(u));
            }
            None => {
                let _ = writeln!(out, " {name} >= 0");
            }
        }
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn small_program() {
        let mut lp = LinearProgram::new();
        let x = lp.add_var("x");
        let y = lp.add_var("y");
        lp.set_upper(y, int(4));
        lp.set_objective(vec![(x, int(1)), (y, int(2))]);
        lp.add_row("c1", vec![(x, int(1)), (y, int(-1))], RowKind::Le, ratio(1, 2));
        let text = to_lp_format(&lp);
        assert!(text.contains("obj: x + 2 y"));
        assert!(text.contains("c1: x - y <= 0.5"));
        assert!(text.contains("0 <= y <= 4"));
        assert!(text.ends_with("End\n"));
    }
}
