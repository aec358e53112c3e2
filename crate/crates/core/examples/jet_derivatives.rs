//! Second derivatives by forward-mode differentiation, compared with finite differences.

use einstein_lab::{Jet2, Result};

fn f(x: Jet2, y: Jet2) -> Result<Jet2> {
    let num = Jet2::ONE - (x * y).powi(2);
    num.checked_div((x - y).powi(4))
}

fn main() -> Result<()> {
    let (x0, y0) = (-0.4, 0.3);
    let j = f(Jet2::x(x0), Jet2::y(y0))?;
    let g = |x: f64, y: f64| f(Jet2::constant(x), Jet2::constant(y)).map(|v| v.value);
    let h = 1e-4;
    let fd_xy = (g(x0 + h, y0 + h)? - g(x0 + h, y0 - h)? - g(x0 - h, y0 + h)? + g(x0 - h, y0 - h)?) / (4.0 * h * h);
    println!("f       = {:.12}", j.value);
    println!("grad    = {:?}", j.grad());
    println!("hessian = {:?}", j.hess());
    println!("d2f/dxdy: jet {:.8}, finite difference {:.8}", j.dxy, fd_xy);
    Ok(())
}
