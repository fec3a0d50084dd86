use std::io::Write;

use super::{BilinearCheckReport, GevreyReport, KernelNormEstimate};
use crate::{Result, Scalar};

/// Writes `t,fitted_radius,predicted_radius,residual`.
pub fn write_gevrey_study<T: Scalar, W: Write>(reports: &[GevreyReport<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "fitted_radius", "predicted_radius", "residual"])?;
    for r in reports {
        w.write_record([
            r.t.to_string(),
            r.fit.radius.to_string(),
            r.predicted.to_string(),
            r.fit.residual.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `member,lhs,rhs,ratio`.
pub fn write_bilinear_report<T: Scalar, W: Write>(report: &BilinearCheckReport<T>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["member", "lhs", "rhs", "ratio"])?;
    for s in &report.samples {
        w.write_record([s.member.to_string(), s.lhs.to_string(), s.rhs.to_string(), s.ratio.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `sigma,alpha,t,value,rescaled_constant`.
pub fn write_kernel_norms<T: Scalar, W: Write>(estimates: &[KernelNormEstimate<T>], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["sigma", "alpha", "t", "value", "rescaled_constant"])?;
    for e in estimates {
        w.write_record([
            e.sigma.to_string(),
            e.alpha.to_string(),
            e.t.to_string(),
            e.value.to_string(),
            e.rescaled.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gevrey::kernel_l1_norm;

    #[test]
    fn kernel_csv_shape() {
        let e = kernel_l1_norm(0.0, 2.0, 1.0, 1.0, 1, 256, 60.0).unwrap();
        let mut buf = Vec::new();
        write_kernel_norms(&[e], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "sigma,alpha,t,value,rescaled_constant");
        assert_eq!(lines.len(), 2);
        assert!(lines[1].starts_with("0,2,1,"));
    }
}
