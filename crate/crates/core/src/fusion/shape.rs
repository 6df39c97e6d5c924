//! Symbolic description of the state-sum building blocks as products
//! `± t^e · Π (q;q)_x^{m_x} · (1 − q)^c`, where `(q;q)_x = Π_{j=1}^x (1 − q^j)`.
//!
//! Every evaluation of `U`, `Θ`, and each summand of `Tet` has this form once
//! quantum integers are written as `[x] = t^{−4(x−1)}(1 − q^x)/(1 − q)`.

/// `(−1)^{neg} · t^{texp} · Π_i (q;q)_{atoms[i].0}^{atoms[i].1} · (1 − q)^{onemq}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Shape {
    pub neg: bool,
    pub texp: i64,
    pub atoms: Vec<(i64, i32)>,
    pub onemq: i32,
}

impl Shape {
    /// The constant 1.
    pub fn one() -> Self {
        Shape::default()
    }

    /// A signed monomial `(−1)^{neg} t^{texp}`.
    pub fn monomial(neg: bool, texp: i64) -> Self {
        Shape {
            neg,
            texp,
            ..Shape::default()
        }
    }

    /// Product of two shapes.
    pub fn times(&self, o: &Shape) -> Shape {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&o.atoms);
        Shape {
            neg: self.neg ^ o.neg,
            texp: self.texp + o.texp,
            atoms,
            onemq: self.onemq + o.onemq,
        }
    }

    /// Reciprocal.
    pub fn inverse(&self) -> Shape {
        Shape {
            neg: self.neg,
            texp: -self.texp,
            atoms: self.atoms.iter().map(|&(x, m)| (x, -m)).collect(),
            onemq: -self.onemq,
        }
    }

    /// Integer power (negative allowed) of a monomial shape.
    pub fn monomial_pow(&self, e: i64) -> Shape {
        assert!(self.atoms.is_empty() && self.onemq == 0, "power of a non-monomial shape");
        Shape {
            neg: self.neg && e.rem_euclid(2) == 1,
            texp: self.texp * e,
            atoms: Vec::new(),
            onemq: 0,
        }
    }

    /// `μ(a) = (−1)^a t^{2a(a+2)}`.
    pub fn mu(a: i64) -> Shape {
        Shape::monomial(a.rem_euclid(2) == 1, 2 * a * (a + 2))
    }

    /// `ν(c,a,b) = (−1)^{(a+b−c)/2} t^{−a(a+2) − b(b+2) + c(c+2)}` (requires `a+b−c` even).
    pub fn nu(c: i64, a: i64, b: i64) -> Option<Shape> {
        if (a + b - c).rem_euclid(2) != 0 {
            return None;
        }
        Some(Shape::monomial(
            ((a + b - c) / 2).rem_euclid(2) == 1,
            -a * (a + 2) - b * (b + 2) + c * (c + 2),
        ))
    }

    /// `[x]` for `x ≥ 1`.
    pub fn qint(x: i64) -> Shape {
        Shape {
            neg: false,
            texp: -4 * (x - 1),
            atoms: vec![(x, 1), (x - 1, -1)],
            onemq: -1,
        }
    }

    /// `[a; parts]` q-multinomial, `a = Σ parts`.
    pub fn multinomial(a: i64, parts: &[i64]) -> Shape {
        let sq: i64 = parts.iter().map(|x| x * x).sum();
        let mut atoms = vec![(a, 1)];
        atoms.extend(parts.iter().map(|&x| (x, -1)));
        Shape {
            neg: false,
            texp: -2 * (a * a - sq),
            atoms,
            onemq: (parts.iter().sum::<i64>() - a) as i32,
        }
    }

    /// `U(a) = (−1)^a [a+1]`.
    pub fn u(a: i64) -> Shape {
        let mut s = Shape::qint(a + 1);
        s.neg = a.rem_euclid(2) == 1;
        s
    }

    /// `Θ(a,b,c)` for an admissible triple.
    pub fn theta(a: i64, b: i64, c: i64) -> Shape {
        let s = (a + b + c) / 2;
        let (x, y, z) = ((-a + b + c) / 2, (a - b + c) / 2, (a + b - c) / 2);
        let mut r = Shape::qint(s + 1).times(&Shape::multinomial(s, &[x, y, z]));
        r.neg = s.rem_euclid(2) == 1;
        r
    }

    /// Summand `k` of `Tet` with the given `S_j` and `T_i`.
    pub fn tet_term(s: &[i64; 3], t: &[i64; 4], k: i64) -> Shape {
        let parts = [
            s[0] - k,
            s[1] - k,
            s[2] - k,
            k - t[0],
            k - t[1],
            k - t[2],
            k - t[3],
        ];
        let mut r = Shape::qint(k + 1).times(&Shape::multinomial(k, &parts));
        r.neg = k.rem_euclid(2) == 1;
        r
    }

    /// Merges repeated atoms and drops `(q;q)_0 = 1` and zero multiplicities.
    pub fn normalized(mut self) -> Shape {
        self.atoms.retain(|&(x, m)| x > 0 && m != 0);
        self.atoms.sort_unstable();
        let mut out: Vec<(i64, i32)> = Vec::with_capacity(self.atoms.len());
        for (x, m) in self.atoms {
            match out.last_mut() {
                Some((lx, lm)) if *lx == x => *lm += m,
                _ => out.push((x, m)),
            }
        }
        out.retain(|&(_, m)| m != 0);
        self.atoms = out;
        self
    }
}

/// `S_1..S_3` and `T_1..T_4` of a tetrahedron coloring `(a,b,c,d,e,f)`.
pub fn tet_sums(a: i64, b: i64, c: i64, d: i64, e: i64, f: i64) -> ([i64; 3], [i64; 4]) {
    (
        [(a + d + b + c) / 2, (a + d + e + f) / 2, (b + c + e + f) / 2],
        [
            (a + b + e) / 2,
            (a + c + f) / 2,
            (c + d + e) / 2,
            (b + d + f) / 2,
        ],
    )
}
