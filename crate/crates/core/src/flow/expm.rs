use crate::densemat::MatrixR;

/// Numerator coefficients of the [13/13] Padé approximant to `eˣ`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Matrix exponential by scaling and squaring.
///
/// `j` is the smallest integer with `‖A‖₂/2^j ≤ 1/2`; the [13/13] Padé
/// approximant is evaluated on `A/2^j` and squared `j` times.
pub fn expm(a: &MatrixR) -> MatrixR {
    let d = a.dim();
    let norm = a.op_norm2();
    let mut j = 0i32;
    if norm > 0.5 {
        j = (norm / 0.5).log2().ceil() as i32;
        while norm / 2f64.powi(j) > 0.5 {
            j += 1;
        }
    }
    let x = a.scale(2f64.powi(-j));

    let id = MatrixR::identity(d);
    let x2 = &x * &x;
    let x4 = &x2 * &x2;
    let x6 = &x2 * &x4;
    let b = &PADE13;

    let lin = |terms: &[(&MatrixR, f64)]| -> MatrixR {
        let mut acc = MatrixR::zeros(d);
        for (m, c) in terms {
            acc = &acc + &m.scale(*c);
        }
        acc
    };

    let u_inner = lin(&[(&x6, b[13]), (&x4, b[11]), (&x2, b[9])]);
    let u_outer = lin(&[(&x6, b[7]), (&x4, b[5]), (&x2, b[3]), (&id, b[1])]);
    let u = &x * &(&(&x6 * &u_inner) + &u_outer);
    let v_inner = lin(&[(&x6, b[12]), (&x4, b[10]), (&x2, b[8])]);
    let v_outer = lin(&[(&x6, b[6]), (&x4, b[4]), (&x2, b[2]), (&id, b[0])]);
    let v = &(&x6 * &v_inner) + &v_outer;

    let denom = &v - &u;
    let numer = &v + &u;
    let mut r = denom
        .solve(&numer)
        .expect("Padé denominator is nonsingular for ‖X‖ ≤ 1/2");
    for _ in 0..j {
        r = &r * &r;
    }
    r
}
