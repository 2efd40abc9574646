//! Deterministic table emission. Numbers carry 12 significant digits,
//! rows follow grid order, line endings are `\n`, and flagged rows put
//! `nan` in the value columns with the reason in the trailing `flag`
//! column.

use crate::abelian::Fig1Row;
use crate::nonabelian::Fig2Row;

/// 12 significant digits, or literal `nan` for flagged values.
/// Negative zero prints as zero.
pub fn fmt_sig12(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else {
        let x = if x == 0.0 { 0.0 } else { x };
        format!("{x:.11e}")
    }
}

fn flag_label(flagged: bool) -> &'static str {
    if flagged {
        "degenerate"
    } else {
        ""
    }
}

pub fn fig1a_csv(rows: &[Fig1Row]) -> String {
    let mut out = String::from("theta,gamma_ratio,eta,flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt_sig12(r.theta),
            fmt_sig12(r.gamma_ratio),
            fmt_sig12(r.eta),
            flag_label(r.degenerate),
        ));
    }
    out
}

pub fn fig1b_csv(rows: &[Fig1Row]) -> String {
    let mut out = String::from("theta,gamma_ratio,phi_total,phi_adiabatic_ref,flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig12(r.theta),
            fmt_sig12(r.gamma_ratio),
            fmt_sig12(r.phi_total),
            fmt_sig12(r.phi_adiabatic_ref),
            flag_label(r.degenerate),
        ));
    }
    out
}

pub fn fig2_csv(rows: &[Fig2Row]) -> String {
    let mut out = String::from("gamma_ratio,one_minus_cos_theta,pop_d1,pop_d2,eta,flag\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_sig12(r.gamma_ratio),
            fmt_sig12(r.one_minus_cos_theta),
            fmt_sig12(r.pop_d1),
            fmt_sig12(r.pop_d2),
            fmt_sig12(r.eta),
            flag_label(r.flagged),
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_sig12(0.5), "5.00000000000e-1");
        assert_eq!(fmt_sig12(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt_sig12(f64::NAN), "nan");
        assert_eq!(fmt_sig12(-1.25e-9), "-1.25000000000e-9");
    }

    #[test]
    fn csv_layout() {
        let rows = vec![crate::abelian::Fig1Row {
            theta: 0.5,
            gamma_ratio: 0.25,
            eta: 0.75,
            phi_total: f64::NAN,
            phi_adiabatic_ref: -1.0,
            degenerate: true,
        }];
        let a = fig1a_csv(&rows);
        assert!(a.starts_with("theta,gamma_ratio,eta,flag\n"));
        assert!(a.ends_with("\n"));
        let b = fig1b_csv(&rows);
        assert!(b.contains("nan,-1.00000000000e0,degenerate"));
    }
}
