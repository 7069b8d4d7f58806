#![allow(dead_code)]

use curv4::{CurvTensor, Frame, Sym2};

pub type Full = [[[[f64; 4]; 4]; 4]; 4];

pub fn full(r: &CurvTensor) -> Full {
    let mut t = [[[[0.0; 4]; 4]; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    t[i][j][k][l] = r.get(i, j, k, l);
                }
            }
        }
    }
    t
}

pub fn naive_ricci(t: &Full) -> [[f64; 4]; 4] {
    let mut r = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                r[i][j] += t[i][k][j][k];
            }
        }
    }
    r
}

pub fn naive_triple_contraction(t: &Full) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for p in 0..4 {
                    for q in 0..4 {
                        c[i][j] += t[i][k][p][q] * t[j][k][p][q];
                    }
                }
            }
        }
    }
    c
}

pub fn naive_act_on_sym2(t: &Full, b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for p in 0..4 {
                for q in 0..4 {
                    c[i][j] += t[i][p][j][q] * b[p][q];
                }
            }
        }
    }
    c
}

/// `R'_abcd = R(u_a, u_b, u_c, u_d)` for the columns `u` of `f`.
pub fn naive_rotate(t: &Full, f: &Frame) -> Full {
    let m = f.matrix();
    let mut out = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let mut acc = 0.0;
                    for i in 0..4 {
                        for j in 0..4 {
                            for k in 0..4 {
                                for l in 0..4 {
                                    acc += t[i][j][k][l] * m[i][a] * m[j][b] * m[k][c] * m[l][d];
                                }
                            }
                        }
                    }
                    out[a][b][c][d] = acc;
                }
            }
        }
    }
    out
}

/// Weyl part by the explicit formula, with `g = δ`.
pub fn naive_weyl(t: &Full) -> Full {
    let r = naive_ricci(t);
    let s: f64 = (0..4).map(|i| r[i][i]).sum();
    let mut e = r;
    for i in 0..4 {
        e[i][i] -= s / 4.0;
    }
    let d = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let mut w = *t;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    let eg = e[i][k] * d(j, l) + d(i, k) * e[j][l] - e[i][l] * d(j, k) - d(i, l) * e[j][k];
                    let gg = 2.0 * (d(i, k) * d(j, l) - d(i, l) * d(j, k));
                    w[i][j][k][l] -= 0.5 * eg + s / 24.0 * gg;
                }
            }
        }
    }
    w
}

pub fn max_diff_full(a: &Full, b: &Full) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    m = m.max((a[i][j][k][l] - b[i][j][k][l]).abs());
                }
            }
        }
    }
    m
}

pub fn max_diff4(a: &[[f64; 4]; 4], b: &Sym2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            m = m.max((a[i][j] - b.get(i, j)).abs());
        }
    }
    m
}

pub fn full_scale(t: &Full) -> f64 {
    t.iter().flatten().flatten().flatten().fold(1.0f64, |m, x| m.max(x.abs()))
}
