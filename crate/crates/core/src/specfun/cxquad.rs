//! Adaptive Gauss-Kronrod panels for complex-valued integrands over a real
//! variable. Used by the rotated-contour kernel evaluators.

use super::cx::Cx;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15_cx<F: FnMut(f64) -> Cx>(f: &mut F, a: f64, b: f64) -> (Cx, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc.scale(WGK[7]);
    let mut rg = fc.scale(WG[3]);
    for j in 0..7 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        let s = f1.add(f2);
        rk = rk.add(s.scale(WGK[j]));
        if j % 2 == 1 {
            rg = rg.add(s.scale(WG[j / 2]));
        }
    }
    (rk.scale(h), rk.sub(rg).abs() * h.abs())
}

/// Adaptive complex integration on a finite interval. Returns
/// (value, error estimate, nodes used).
pub fn integrate_cx<F: FnMut(f64) -> Cx>(
    f: &mut F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
) -> (Cx, f64, usize) {
    if b <= a {
        return (Cx::ZERO, 0.0, 0);
    }
    let (v0, e0) = gk15_cx(f, a, b);
    let mut nodes = 15usize;
    let mut segs: Vec<(f64, f64, Cx, f64)> = vec![(a, b, v0, e0)];
    loop {
        let mut tot = Cx::ZERO;
        let mut err = 0.0;
        for s in &segs {
            tot = tot.add(s.2);
            err += s.3;
        }
        let tol = abs_tol.max(rel_tol * tot.abs());
        if err <= tol || nodes + 30 > budget {
            return (tot, err, nodes);
        }
        let (wi, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (sa, sb, _, _) = segs.swap_remove(wi);
        let mid = 0.5 * (sa + sb);
        if mid <= sa || mid >= sb {
            let (v, e) = gk15_cx(f, sa, sb);
            segs.push((sa, sb, v, 0.1 * e));
            nodes += 15;
            continue;
        }
        let (v1, e1) = gk15_cx(f, sa, mid);
        let (v2, e2) = gk15_cx(f, mid, sb);
        nodes += 30;
        segs.push((sa, mid, v1, e1));
        segs.push((mid, sb, v2, e2));
    }
}

/// Complex integration with panel widths bounded by the local oscillation
/// period `2π/freq(u)`; each panel is refined adaptively.
pub fn integrate_cx_oscillatory<F: FnMut(f64) -> Cx, W: Fn(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    freq: W,
    rel_tol: f64,
    abs_tol: f64,
    budget: usize,
) -> (Cx, f64, usize) {
    let mut lo = a;
    let mut tot = Cx::ZERO;
    let mut err = 0.0;
    let mut nodes = 0usize;
    while lo < b {
        let om = freq(lo).abs().max(1.0);
        let width = (1.5 * std::f64::consts::TAU / om).min(0.8);
        let hi = (lo + width).min(b);
        let (v, e, n) = integrate_cx(f, lo, hi, rel_tol, abs_tol, 6_000);
        tot = tot.add(v);
        err += e;
        nodes += n;
        lo = hi;
        if nodes > budget {
            break;
        }
    }
    (tot, err, nodes)
}
