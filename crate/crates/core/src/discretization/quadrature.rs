use crate::error::{Error, Result};

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
pub fn gauss_legendre(order: usize) -> Result<Vec<(f64, f64)>> {
    let rule = match order {
        2 => {
            let x = 1.0 / 3.0_f64.sqrt();
            vec![(-x, 1.0), (x, 1.0)]
        }
        3 => {
            let x = 0.6_f64.sqrt();
            vec![(-x, 5.0 / 9.0), (0.0, 8.0 / 9.0), (x, 5.0 / 9.0)]
        }
        4 => {
            let (x1, w1) = (0.339_981_043_584_856_3, 0.652_145_154_862_546_1);
            let (x2, w2) = (0.861_136_311_594_052_6, 0.347_854_845_137_453_9);
            vec![(-x2, w2), (-x1, w1), (x1, w1), (x2, w2)]
        }
        _ => return Err(Error::Parameter(format!("unsupported quadrature order {order}, expected 2, 3 or 4"))),
    };
    Ok(rule)
}

/// Tensor-product rule on the reference square `[−1, 1]²`.
pub fn element_quadrature(order: usize) -> Result<Vec<([f64; 2], f64)>> {
    let line = gauss_legendre(order)?;
    let mut pts = Vec::with_capacity(line.len() * line.len());
    for &(y, wy) in &line {
        for &(x, wx) in &line {
            pts.push(([x, y], wx * wy));
        }
    }
    Ok(pts)
}
