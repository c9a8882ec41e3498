//! Finite renamings `r: [m] -> [n]` with 1-based indices.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Renaming {
    cod: usize,
    map: Vec<usize>,
}

impl Renaming {
    pub fn new(map: Vec<usize>, cod: usize) -> Result<Self> {
        if let Some(&bad) = map.iter().find(|&&e| e == 0 || e > cod) {
            return Err(Error::Renaming(format!("entry {bad} outside 1..={cod}")));
        }
        Ok(Renaming { cod, map })
    }

    pub fn identity(n: usize) -> Self {
        Renaming {
            cod: n,
            map: (1..=n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.map.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Image of the 1-based index `i`.
    pub fn at(&self, i: usize) -> usize {
        self.map[i - 1]
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.map.len() && self.map.iter().enumerate().all(|(i, &e)| e == i + 1)
    }

    /// `self` first, then `next`.
    pub fn compose(&self, next: &Renaming) -> Result<Renaming> {
        if self.cod != next.dom() {
            return Err(Error::Arity {
                context: "renaming composition",
                expected: next.dom(),
                found: self.cod,
            });
        }
        Ok(Renaming {
            cod: next.cod,
            map: self.map.iter().map(|&i| next.at(i)).collect(),
        })
    }

    /// Block sum: `self` on the first block, `other` shifted past `self.cod()`.
    pub fn tensor(&self, other: &Renaming) -> Renaming {
        let mut map = self.map.clone();
        map.extend(other.map.iter().map(|&e| e + self.cod));
        Renaming {
            cod: self.cod + other.cod,
            map,
        }
    }

    pub fn tensor_all<'a>(parts: impl IntoIterator<Item = &'a Renaming>) -> Renaming {
        parts
            .into_iter()
            .fold(Renaming::identity(0), |acc, r| acc.tensor(r))
    }

    /// `id_left + self + id_right`.
    pub fn pad(&self, left: usize, right: usize) -> Renaming {
        Renaming::identity(left)
            .tensor(self)
            .tensor(&Renaming::identity(right))
    }

    /// Swap the blocks: `(n+1..n+m, 1..n)` in `Ren(m+n, n+m)`.
    pub fn swap(m: usize, n: usize) -> Renaming {
        Renaming {
            cod: n + m,
            map: (n + 1..=n + m).chain(1..=n).collect(),
        }
    }

    /// `(1..n, 1..n)` in `Ren(2n, n)`.
    pub fn copy(n: usize) -> Renaming {
        Renaming {
            cod: n,
            map: (1..=n).chain(1..=n).collect(),
        }
    }

    /// The empty renaming into `n`.
    pub fn discard(n: usize) -> Renaming {
        Renaming {
            cod: n,
            map: Vec::new(),
        }
    }

    /// Copairing `[r, s]` of two renamings with a shared codomain.
    pub fn concat(r: &Renaming, s: &Renaming) -> Result<Renaming> {
        if r.cod != s.cod {
            return Err(Error::Arity {
                context: "renaming concat",
                expected: r.cod,
                found: s.cod,
            });
        }
        let mut map = r.map.clone();
        map.extend_from_slice(&s.map);
        Ok(Renaming { cod: r.cod, map })
    }

    pub fn is_permutation(&self) -> bool {
        if self.dom() != self.cod {
            return false;
        }
        let mut seen = vec![false; self.cod];
        self.map
            .iter()
            .all(|&e| !std::mem::replace(&mut seen[e - 1], true))
    }

    /// Inverse of a permutation.
    pub fn inverse(&self) -> Option<Renaming> {
        if !self.is_permutation() {
            return None;
        }
        let mut map = vec![0; self.cod];
        for (i, &e) in self.map.iter().enumerate() {
            map[e - 1] = i + 1;
        }
        Some(Renaming { cod: self.cod, map })
    }

    /// Every renaming `[m] -> [n]`, in lexicographic order of maps.
    pub fn enumerate(m: usize, n: usize) -> Vec<Renaming> {
        if n == 0 {
            return if m == 0 {
                vec![Renaming::identity(0)]
            } else {
                Vec::new()
            };
        }
        let total = n.pow(m as u32);
        (0..total)
            .map(|mut code| {
                let mut map = vec![0; m];
                for slot in map.iter_mut().rev() {
                    *slot = code % n + 1;
                    code /= n;
                }
                Renaming { cod: n, map }
            })
            .collect()
    }

    pub fn permutations(n: usize) -> Vec<Renaming> {
        Renaming::enumerate(n, n)
            .into_iter()
            .filter(Renaming::is_permutation)
            .collect()
    }

    /// Factor into whole-width layers of generators; composing the layers in
    /// order (first layer applied first) gives back `self`. Sorting uses
    /// adjacent swaps, then adjacent duplicates are merged by copies, then
    /// missing targets are filled by discards.
    pub fn decompose(&self) -> Vec<Layer> {
        let mut layers = Vec::new();
        let mut targets = self.map.clone();
        let width = |len: usize, at: usize, g: Generator| {
            let mut row = vec![Generator::Id; at];
            row.push(g);
            row.extend(std::iter::repeat_n(Generator::Id, len - at - g.dom()));
            Layer(row)
        };

        let len = targets.len();
        for pass in 0..len {
            for j in 0..len.saturating_sub(pass + 1) {
                if targets[j] > targets[j + 1] {
                    layers.push(width(len, j, Generator::Swap));
                    targets.swap(j, j + 1);
                }
            }
        }
        while let Some(j) = (0..targets.len().saturating_sub(1)).find(|&j| targets[j] == targets[j + 1]) {
            layers.push(width(targets.len(), j, Generator::Copy));
            targets.remove(j + 1);
        }
        for v in 1..=self.cod {
            if !targets.contains(&v) {
                let at = targets.iter().filter(|&&t| t < v).count();
                layers.push(width(targets.len(), at, Generator::Discard));
                targets.insert(at, v);
            }
        }
        layers
    }

    /// Inverse of [`Renaming::decompose`]; `dom` fixes the width of an empty list.
    pub fn recompose(layers: &[Layer], dom: usize) -> Result<Renaming> {
        layers
            .iter()
            .try_fold(Renaming::identity(dom), |acc, layer| acc.compose(&layer.renaming()))
    }
}

/// Generating renamings: `id_1`, `σ_{1,1}`, `Δ_1` and `!_1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Generator {
    Id,
    Swap,
    Copy,
    Discard,
}

impl Generator {
    pub fn renaming(self) -> Renaming {
        match self {
            Generator::Id => Renaming::identity(1),
            Generator::Swap => Renaming::swap(1, 1),
            Generator::Copy => Renaming::copy(1),
            Generator::Discard => Renaming::discard(1),
        }
    }

    pub fn dom(self) -> usize {
        match self {
            Generator::Id => 1,
            Generator::Swap | Generator::Copy => 2,
            Generator::Discard => 0,
        }
    }
}

/// A row of generators combined by tensor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Layer(pub Vec<Generator>);

impl Layer {
    pub fn renaming(&self) -> Renaming {
        self.0
            .iter()
            .fold(Renaming::identity(0), |acc, g| acc.tensor(&g.renaming()))
    }
}

impl fmt::Display for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "):{}", self.cod)
    }
}

impl fmt::Debug for Renaming {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Renaming {
    type Err = Error;

    /// Parses `(a1 a2 … am):n`; commas are accepted as separators.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Renaming(format!("{msg} in `{s}`"));
        let s = s.trim();
        let (body, cod) = s.rsplit_once(':').ok_or_else(|| bad("missing `:n`"))?;
        let cod: usize = cod.trim().parse().map_err(|_| bad("bad codomain"))?;
        let body = body
            .trim()
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| bad("expected parentheses"))?;
        let map = body
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| bad("bad entry")))
            .collect::<Result<Vec<_>>>()?;
        Renaming::new(map, cod)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ren(map: &[usize], cod: usize) -> Renaming {
        Renaming::new(map.to_vec(), cod).unwrap()
    }

    #[test]
    fn generators_match_their_tuples() {
        assert_eq!(Renaming::identity(3).map(), &[1, 2, 3]);
        assert_eq!(Renaming::identity(0).dom(), 0);
        assert_eq!(Renaming::swap(1, 1), ren(&[2, 1], 2));
        assert_eq!(Renaming::swap(2, 1), ren(&[2, 3, 1], 3));
        assert_eq!(Renaming::copy(2), ren(&[1, 2, 1, 2], 2));
        assert_eq!(Renaming::discard(2), ren(&[], 2));
        for n in 0..4 {
            assert_eq!(Renaming::swap(0, n), Renaming::identity(n));
        }
    }

    #[test]
    fn swap_is_involutive() {
        let s = ren(&[2, 1], 2);
        assert_eq!(s.compose(&s).unwrap(), Renaming::identity(2));
        for m in 0..=3 {
            for n in 0..=3 {
                let there = Renaming::swap(m, n);
                let back = Renaming::swap(n, m);
                assert_eq!(there.compose(&back).unwrap(), Renaming::identity(m + n));
            }
        }
    }

    #[test]
    fn rejects_out_of_range_entries() {
        assert!(Renaming::new(vec![0], 2).is_err());
        assert!(Renaming::new(vec![3], 2).is_err());
        assert!(ren(&[1], 1).compose(&ren(&[1, 2], 2)).is_err());
        assert!(Renaming::concat(&ren(&[1], 1), &ren(&[1], 2)).is_err());
    }

    #[test]
    fn permutation_check() {
        assert!(ren(&[2, 1], 2).is_permutation());
        assert!(!ren(&[1, 1], 2).is_permutation());
        assert!(!ren(&[1], 2).is_permutation());
        assert_eq!(Renaming::permutations(3).len(), 6);
    }

    #[test]
    fn decompose_small_cases() {
        assert!(Renaming::identity(2).decompose().is_empty());
        assert_eq!(
            Renaming::swap(1, 1).decompose(),
            vec![Layer(vec![Generator::Swap])]
        );
        assert_eq!(Renaming::copy(1).decompose(), vec![Layer(vec![Generator::Copy])]);
        assert_eq!(
            Renaming::discard(1).decompose(),
            vec![Layer(vec![Generator::Discard])]
        );
    }

    #[test]
    fn text_round_trip() {
        let r = ren(&[3, 1, 1], 4);
        assert_eq!(r.to_string(), "(3 1 1):4");
        assert_eq!("(3 1 1):4".parse::<Renaming>().unwrap(), r);
        assert_eq!("( ):0".parse::<Renaming>().unwrap(), Renaming::identity(0));
        assert!("(1 2)".parse::<Renaming>().is_err());
        assert!("(5):2".parse::<Renaming>().is_err());
    }
}
