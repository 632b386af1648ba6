//! The group description language.
//!
//! ```text
//! expr  := term ( "x" term )*
//! term  := S(n) | A(n) | C(n) | D(n) | Q(8) | perm[deg; cycles; cycles; …] | "(" expr ")"
//! ```
//!
//! `D(n)` is dihedral of order `n`. `X x Y` is the direct product acting on
//! disjoint point sets. Cycles inside `perm[…]` are 1-based.

use super::element::Perm;
use super::group::{PermGroup, DEFAULT_CAP};
use crate::error::{Error, Result};

pub fn parse_group_spec(text: &str) -> Result<PermGroup> {
    parse_group_spec_with_cap(text, DEFAULT_CAP)
}

pub fn parse_group_spec_with_cap(text: &str, cap: usize) -> Result<PermGroup> {
    let (degree, gens) = parse_generators(text)?;
    PermGroup::new(degree, gens, cap)
}

/// Parses to `(degree, generators)` without enumerating the group.
pub fn parse_generators(text: &str) -> Result<(usize, Vec<Perm>)> {
    let mut p = Parser {
        s: text.as_bytes(),
        i: 0,
    };
    let r = p.expr()?;
    p.ws();
    if p.i != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(r)
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

type Gens = (usize, Vec<Perm>);

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax(format!("{msg} at offset {}", self.i))
    }

    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.ws();
        let start = self.i;
        while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.s[start..self.i])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn expr(&mut self) -> Result<Gens> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'x') {
            self.i += 1;
            let rhs = self.term()?;
            acc = direct_product(acc, rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Gens> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'p') => {
                if !self.s[self.i..].starts_with(b"perm") {
                    return Err(self.err("unknown group"));
                }
                self.i += 4;
                self.perm_list()
            }
            Some(c @ (b'S' | b'A' | b'C' | b'D' | b'Q')) => {
                self.i += 1;
                self.expect(b'(')?;
                let n = self.number()?;
                self.expect(b')')?;
                family(c, n).map_err(|m| self.err(&m))
            }
            _ => Err(self.err("expected a group")),
        }
    }

    fn perm_list(&mut self) -> Result<Gens> {
        self.expect(b'[')?;
        let degree = self.number()?;
        if degree == 0 {
            return Err(self.err("degree must be positive"));
        }
        let mut gens = Vec::new();
        loop {
            match self.peek() {
                Some(b']') => {
                    self.i += 1;
                    break;
                }
                Some(b';') => {
                    self.i += 1;
                    let mut cycles = Vec::new();
                    while self.peek() == Some(b'(') {
                        self.i += 1;
                        let mut c = Vec::new();
                        while self.peek() != Some(b')') {
                            let k = self.number()?;
                            if k == 0 || k > degree {
                                return Err(self.err(&format!("point {k} outside 1..{degree}")));
                            }
                            c.push(k as u32 - 1);
                            if self.peek() == Some(b',') {
                                self.i += 1;
                            }
                        }
                        self.i += 1;
                        cycles.push(c);
                    }
                    let g = Perm::from_cycles(degree, &cycles)
                        .map_err(|e| Error::Syntax(e.to_string()))?;
                    gens.push(g);
                }
                _ => return Err(self.err("expected ';' or ']'")),
            }
        }
        Ok((degree, gens))
    }
}

fn cycle(degree: usize, pts: &[u32]) -> Perm {
    Perm::from_cycles(degree, &[pts.to_vec()]).unwrap()
}

fn family(kind: u8, n: usize) -> std::result::Result<Gens, String> {
    if n == 0 {
        return Err("group parameter must be positive".into());
    }
    Ok(match kind {
        b'S' => {
            let all: Vec<u32> = (0..n as u32).collect();
            if n <= 1 {
                (1, vec![])
            } else {
                (n, vec![cycle(n, &all), cycle(n, &[0, 1])])
            }
        }
        b'A' => {
            if n < 3 {
                (n, vec![])
            } else {
                (n, (2..n as u32).map(|i| cycle(n, &[0, 1, i])).collect())
            }
        }
        b'C' => {
            let all: Vec<u32> = (0..n as u32).collect();
            if n == 1 {
                (1, vec![])
            } else {
                (n, vec![cycle(n, &all)])
            }
        }
        b'D' => {
            if n % 2 != 0 {
                return Err(format!("dihedral order {n} must be even"));
            }
            match n / 2 {
                1 => (2, vec![cycle(2, &[0, 1])]),
                2 => (
                    4,
                    vec![
                        Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap(),
                        Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap(),
                    ],
                ),
                k => {
                    let rot: Vec<u32> = (0..k as u32).collect();
                    let refl: Vec<Vec<u32>> = (1..k as u32)
                        .filter(|&i| i < k as u32 - i)
                        .map(|i| vec![i, k as u32 - i])
                        .collect();
                    (
                        k,
                        vec![cycle(k, &rot), Perm::from_cycles(k, &refl).unwrap()],
                    )
                }
            }
        }
        b'Q' => {
            if n != 8 {
                return Err("only Q(8) is supported".into());
            }
            quaternion()
        }
        _ => unreachable!(),
    })
}

/// Left-regular representation of the quaternion group on 8 points, indexing
/// `±1, ±i, ±j, ±k` as `0..8` (sign in the low bit).
fn quaternion() -> Gens {
    // unit products: table[a][b] = (sign, unit) for a, b in {1, i, j, k}
    const T: [[(u32, u32); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mul = |x: u32, y: u32| {
        let (s, u) = T[(x / 2) as usize][(y / 2) as usize];
        u * 2 + ((x % 2) ^ (y % 2) ^ s)
    };
    let left = |a: u32| Perm::from_images((0..8).map(|y| mul(a, y)).collect()).unwrap();
    (8, vec![left(2), left(4)])
}

fn direct_product(a: Gens, b: Gens) -> Gens {
    let degree = a.0 + b.0;
    let mut gens: Vec<Perm> = a.1.iter().map(|g| g.shifted(0, degree)).collect();
    gens.extend(b.1.iter().map(|g| g.shifted(a.0, degree)));
    (degree, gens)
}
