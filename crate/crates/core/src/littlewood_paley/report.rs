use std::io::Write;

use super::norms::NormReport;
use crate::{Result, Scalar};

/// Writes `j,block_lp_norm,weight,contribution`.
pub fn write_norm_report<T: Scalar, W: Write>(report: &NormReport<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "block_lp_norm", "weight", "contribution"])?;
    for row in &report.rows {
        w.write_record([
            row.j.to_string(),
            row.block_lp_norm.to_string(),
            row.weight.to_string(),
            row.contribution.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `s,p,q,value,j_min,j_max`, one row per report.
pub fn write_besov_summary<T: Scalar, W: Write>(reports: &[NormReport<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "p", "q", "value", "j_min", "j_max"])?;
    for r in reports {
        w.write_record([
            r.params.s.to_string(),
            exponent_label(r.params.p),
            exponent_label(r.params.q),
            r.value.to_string(),
            r.j_min.to_string(),
            r.j_max.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `inf` for infinite exponents, the plain value otherwise.
pub fn exponent_label<T: Scalar>(v: T) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlewood_paley::{build_filter_bank, norm_report, BesovParams};
    use crate::spectral::{make_grid, SpectralField};
    use std::f64::consts::TAU;

    #[test]
    fn csv_headers_and_rows() {
        let g = make_grid(1, 16, TAU).unwrap();
        let bank = build_filter_bank(&g);
        let f = SpectralField::cosine_mode(&g, &[2], 1.0).unwrap();
        let rep = norm_report(&f, &BesovParams::new(0.0, f64::INFINITY, 1.0).unwrap(), &bank).unwrap();
        let mut buf = Vec::new();
        write_norm_report(&rep, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("j,block_lp_norm,weight,contribution\n"));
        assert_eq!(text.lines().count(), 1 + bank.shell_count());

        let mut buf = Vec::new();
        write_besov_summary(&[rep], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("s,p,q,value,j_min,j_max"));
        assert!(lines.next().unwrap().starts_with("0,inf,1,"));
    }
}
