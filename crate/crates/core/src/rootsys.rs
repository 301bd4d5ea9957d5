//! Root systems given by Cartan data.
//!
//! Conventions: nodes are numbered `1..=rank` in the public API and follow
//! Bourbaki for named types. The Cartan matrix satisfies
//! `A[i][j] = <alpha_j, alpha_i^vee>`, so the simple root `alpha_i` has
//! fundamental-weight coordinates equal to the `i`-th column of `A`.
//! A symmetrizer `d` with `d_i A[i][j] = d_j A[j][i]` records squared root
//! lengths up to a common factor; long roots carry the largest `d_i` of their
//! component.

use std::collections::HashMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Integer coordinate vector, inline for rank <= 8.
pub type Coords = SmallVec<[i32; 8]>;

/// A weight in fundamental-weight coordinates: `coords[i] = <lambda, alpha_i^vee>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Weight(pub Coords);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(SmallVec::from_elem(0, rank))
    }

    pub fn from_slice(coords: &[i32]) -> Self {
        Weight(SmallVec::from_slice(coords))
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i32) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }
}

/// A root in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root(pub Coords);

impl Root {
    pub fn from_slice(coords: &[i32]) -> Self {
        Root(SmallVec::from_slice(coords))
    }

    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().all(|&c| c >= 0) && self.0.iter().any(|&c| c > 0)
    }

    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_root_combination(&self.0, "a"))
    }
}

/// Formats `sum c_i a_i` as e.g. `2a1+a2` or `-a1-a2`; zero is `0`.
pub(crate) fn format_root_combination(coords: &[i32], symbol: &str) -> String {
    let mut out = String::new();
    for (i, &c) in coords.iter().enumerate() {
        if c == 0 {
            continue;
        }
        if c < 0 {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        if c.abs() != 1 {
            out.push_str(&c.abs().to_string());
        }
        out.push_str(symbol);
        out.push_str(&(i + 1).to_string());
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A finite-type Cartan datum together with its positive roots.
#[derive(Clone, Debug)]
pub struct CartanDatum {
    rank: usize,
    cartan: Vec<i32>,
    symmetrizer: Vec<i32>,
    label: Option<String>,
    positive_roots: Vec<Root>,
    root_lookup: HashMap<Root, usize>,
    // adjugate and determinant of A, for converting weights back to root coordinates
    adjugate: Vec<i64>,
    det: i64,
}

impl PartialEq for CartanDatum {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.cartan == other.cartan
    }
}

impl Eq for CartanDatum {}

impl CartanDatum {
    /// Builds a datum from a Cartan matrix, deriving the symmetrizer when absent.
    #[allow(clippy::needless_range_loop)]
    pub fn new(cartan: Vec<Vec<i32>>, symmetrizer: Option<Vec<i32>>) -> Result<Self> {
        let rank = cartan.len();
        if rank == 0 {
            return Err(Error::InvalidCartan("rank must be positive".into()));
        }
        if rank > 64 {
            return Err(Error::InvalidCartan("rank must be at most 64".into()));
        }
        if cartan.iter().any(|row| row.len() != rank) {
            return Err(Error::InvalidCartan("matrix is not square".into()));
        }
        for i in 0..rank {
            if cartan[i][i] != 2 {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry ({0},{0}) is not 2",
                    i + 1
                )));
            }
            for j in 0..rank {
                if i == j {
                    continue;
                }
                if cartan[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry ({},{}) is positive",
                        i + 1,
                        j + 1
                    )));
                }
                if (cartan[i][j] == 0) != (cartan[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "entries ({0},{1}) and ({1},{0}) must vanish together",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let symmetrizer = match symmetrizer {
            Some(d) => {
                if d.len() != rank {
                    return Err(Error::InvalidCartan(
                        "symmetrizer length differs from rank".into(),
                    ));
                }
                if d.iter().any(|&x| x <= 0) {
                    return Err(Error::InvalidCartan(
                        "symmetrizer entries must be positive".into(),
                    ));
                }
                d
            }
            None => derive_symmetrizer(&cartan)?,
        };
        for i in 0..rank {
            for j in 0..rank {
                if symmetrizer[i] * cartan[i][j] != symmetrizer[j] * cartan[j][i] {
                    return Err(Error::InvalidCartan(format!(
                        "symmetrizer does not symmetrize entries ({0},{1}) and ({1},{0})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let sym: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| symmetrizer[i] as i64 * cartan[i][j] as i64)
                    .collect()
            })
            .collect();
        for m in 1..=rank {
            let minor: Vec<Vec<i64>> = sym[..m].iter().map(|row| row[..m].to_vec()).collect();
            if determinant(&minor) <= 0 {
                return Err(Error::InvalidCartan("matrix is not of finite type".into()));
            }
        }

        let flat: Vec<i32> = cartan.iter().flatten().copied().collect();
        let wide: Vec<Vec<i64>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| x as i64).collect())
            .collect();
        let det = determinant(&wide);
        let adjugate = adjugate(&wide);

        let mut datum = CartanDatum {
            rank,
            cartan: flat,
            symmetrizer,
            label: None,
            positive_roots: Vec::new(),
            root_lookup: HashMap::new(),
            adjugate,
            det,
        };
        datum.positive_roots = datum.close_roots();
        for (idx, root) in datum.positive_roots.iter().enumerate() {
            datum.root_lookup.insert(root.clone(), idx);
        }
        Ok(datum)
    }

    /// Builds a named type (`A3`, `B2`, `C2`, `D4`, `E6`, `F4`, `G2`, ...), Bourbaki numbering.
    pub fn from_type(label: &str) -> Result<Self> {
        let label = label.trim();
        let unknown = || Error::UnknownType(label.to_string());
        let mut chars = label.chars();
        let family = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
        let n: usize = chars.as_str().parse().map_err(|_| unknown())?;
        let gram = match family {
            'A' if n >= 1 => chain_gram(&vec![2; n]),
            'B' if n >= 2 => {
                let mut lens = vec![4; n];
                lens[n - 1] = 2;
                chain_gram(&lens)
            }
            'C' if n >= 2 => {
                let mut lens = vec![2; n];
                lens[n - 1] = 4;
                chain_gram(&lens)
            }
            'D' if n >= 3 => {
                let mut g = chain_gram(&vec![2; n - 1]);
                for row in g.iter_mut() {
                    row.push(0);
                }
                g.push(vec![0; n]);
                g[n - 1][n - 1] = 2;
                g[n - 3][n - 1] = -1;
                g[n - 1][n - 3] = -1;
                g
            }
            'E' if (6..=8).contains(&n) => {
                let mut g = vec![vec![0; n]; n];
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = 2;
                }
                // 1-3-4-5-6-7-8 with 2 attached to 4
                let mut edges = vec![(0, 2), (1, 3), (2, 3)];
                for i in 3..n - 1 {
                    edges.push((i, i + 1));
                }
                for (i, j) in edges {
                    g[i][j] = -1;
                    g[j][i] = -1;
                }
                g
            }
            'F' if n == 4 => chain_gram(&[4, 4, 2, 2]),
            'G' if n == 2 => vec![vec![2, -3], vec![-3, 6]],
            _ => return Err(unknown()),
        };
        let cartan: Vec<Vec<i32>> = (0..n)
            .map(|i| (0..n).map(|j| 2 * gram[i][j] / gram[i][i]).collect())
            .collect();
        let sym: Vec<i32> = (0..n).map(|i| gram[i][i] / 2).collect();
        let mut datum = CartanDatum::new(cartan, Some(sym))?;
        datum.label = Some(format!("{family}{n}"));
        Ok(datum)
    }

    /// Parses the plain-text format: rank, then `rank` rows, then an optional symmetrizer row.
    /// Blank lines and `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty());
        let parse_row = |line: &str| -> Result<Vec<i32>> {
            line.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad integer `{t}`")))
                })
                .collect()
        };
        let rank_line = lines
            .next()
            .ok_or_else(|| Error::Parse("empty Cartan file".into()))?;
        let rank: usize = rank_line
            .parse()
            .map_err(|_| Error::Parse(format!("bad rank `{rank_line}`")))?;
        let mut rows = Vec::with_capacity(rank);
        for i in 0..rank {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing Cartan row {}", i + 1)))?;
            let row = parse_row(line)?;
            if row.len() != rank {
                return Err(Error::Parse(format!(
                    "Cartan row {} has {} entries",
                    i + 1,
                    row.len()
                )));
            }
            rows.push(row);
        }
        let sym = match lines.next() {
            Some(line) => Some(parse_row(line)?),
            None => None,
        };
        if lines.next().is_some() {
            return Err(Error::Parse("trailing data after symmetrizer row".into()));
        }
        CartanDatum::new(rows, sym)
    }

    /// Resolves either a type label or a path to a Cartan-matrix file.
    pub fn resolve(spec: &str) -> Result<Self> {
        match CartanDatum::from_type(spec) {
            Ok(d) => Ok(d),
            Err(e) => {
                let path = std::path::Path::new(spec);
                if path.exists() {
                    let text = std::fs::read_to_string(path)
                        .map_err(|io| Error::Parse(format!("cannot read {spec}: {io}")))?;
                    CartanDatum::from_text(&text)
                } else {
                    Err(e)
                }
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Label, or a compact rendering of the matrix for unnamed data.
    pub fn name(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => {
                let rows: Vec<String> = (0..self.rank)
                    .map(|i| {
                        (0..self.rank)
                            .map(|j| self.entry(i, j).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!("cartan[{}]", rows.join("; "))
            }
        }
    }

    /// 0-based matrix entry.
    #[inline]
    pub(crate) fn entry(&self, i: usize, j: usize) -> i32 {
        self.cartan[i * self.rank + j]
    }

    /// Cartan entry with 1-based nodes.
    pub fn cartan_entry(&self, i: usize, j: usize) -> Result<i32> {
        self.check_node(i)?;
        self.check_node(j)?;
        Ok(self.entry(i - 1, j - 1))
    }

    pub fn symmetrizer(&self) -> &[i32] {
        &self.symmetrizer
    }

    pub(crate) fn check_node(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// Positive roots sorted by height, then with `alpha_1` before `alpha_2` etc.
    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    /// Position of a positive root in [`Self::positive_roots`].
    pub fn positive_root_index(&self, root: &Root) -> Option<usize> {
        self.root_lookup.get(root).copied()
    }

    pub fn is_root(&self, root: &Root) -> bool {
        self.root_lookup.contains_key(root) || self.root_lookup.contains_key(&root.neg())
    }

    pub fn simple_root(&self, i: usize) -> Result<Root> {
        self.check_node(i)?;
        let mut c: Coords = SmallVec::from_elem(0, self.rank);
        c[i - 1] = 1;
        Ok(Root(c))
    }

    /// Whether nodes `i` and `j` are joined in the Dynkin diagram.
    pub fn adjacent(&self, i: usize, j: usize) -> Result<bool> {
        self.check_node(i)?;
        self.check_node(j)?;
        if i == j {
            return Err(Error::InvalidCartan(format!(
                "adjacency of node {i} with itself"
            )));
        }
        Ok(self.entry(i - 1, j - 1) != 0)
    }

    /// Connected component (0-based nodes) of `start` within the node set `mask`.
    pub(crate) fn component_within(&self, start: usize, mask: u64) -> u64 {
        let mut seen = 1u64 << start;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..self.rank {
                if mask & (1 << j) != 0 && seen & (1 << j) == 0 && self.entry(i, j) != 0 {
                    seen |= 1 << j;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// True iff `d_i` is maximal in the connected component of node `i`.
    pub fn is_long(&self, i: usize) -> Result<bool> {
        self.check_node(i)?;
        let all = if self.rank == 64 {
            u64::MAX
        } else {
            (1u64 << self.rank) - 1
        };
        let comp = self.component_within(i - 1, all);
        let d = self.symmetrizer[i - 1];
        Ok((0..self.rank)
            .filter(|j| comp & (1 << j) != 0)
            .all(|j| self.symmetrizer[j] <= d))
    }

    /// True iff every edge among the nodes of `mask` is simple.
    pub(crate) fn simply_laced_on(&self, mask: u64) -> bool {
        (0..self.rank).all(|i| {
            (0..self.rank).all(|j| {
                i == j || mask & (1 << i) == 0 || mask & (1 << j) == 0 || self.entry(i, j) >= -1
            })
        })
    }

    /// `<lambda, alpha_i^vee>` for a root given in simple-root coordinates (0-based `i`).
    #[inline]
    pub(crate) fn root_pairing(&self, coords: &[i32], i: usize) -> i32 {
        (0..self.rank).map(|j| coords[j] * self.entry(i, j)).sum()
    }

    /// Simple reflection on a root (0-based node).
    pub(crate) fn reflect_root_coords(&self, i: usize, coords: &mut [i32]) {
        let p = self.root_pairing(coords, i);
        coords[i] -= p;
    }

    /// Converts a root (or any root-lattice vector) to fundamental-weight coordinates.
    pub fn root_to_weight(&self, root: &Root) -> Weight {
        self.root_coords_to_weight(&root.0)
    }

    pub(crate) fn root_coords_to_weight(&self, coords: &[i32]) -> Weight {
        Weight(
            (0..self.rank)
                .map(|i| self.root_pairing(coords, i))
                .collect(),
        )
    }

    /// Expresses a weight in simple-root coordinates when it lies in the root lattice.
    pub fn weight_to_root_coords(&self, weight: &Weight) -> Option<Coords> {
        let n = self.rank;
        let mut out: Coords = SmallVec::with_capacity(n);
        for i in 0..n {
            let num: i64 = (0..n)
                .map(|j| self.adjugate[i * n + j] * weight.0[j] as i64)
                .sum();
            if num % self.det != 0 {
                return None;
            }
            out.push((num / self.det) as i32);
        }
        Some(out)
    }

    /// `s_i(lambda) = lambda - <lambda, alpha_i^vee> alpha_i`, 1-based node.
    pub fn reflect(&self, i: usize, weight: &Weight) -> Result<Weight> {
        self.check_node(i)?;
        if weight.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                found: weight.rank(),
            });
        }
        let p = weight.0[i - 1];
        Ok(Weight(
            (0..self.rank)
                .map(|j| weight.0[j] - p * self.entry(j, i - 1))
                .collect(),
        ))
    }

    /// Fundamental weight `omega_i`, 1-based.
    pub fn fundamental_weight(&self, i: usize) -> Result<Weight> {
        self.check_node(i)?;
        let mut w = Weight::zero(self.rank);
        w.0[i - 1] = 1;
        Ok(w)
    }

    fn close_roots(&self) -> Vec<Root> {
        let n = self.rank;
        let mut found: Vec<Root> = Vec::new();
        let mut seen = std::collections::HashSet::new();
        let mut frontier: Vec<Root> = (0..n)
            .map(|i| {
                let mut c: Coords = SmallVec::from_elem(0, n);
                c[i] = 1;
                Root(c)
            })
            .collect();
        for r in &frontier {
            seen.insert(r.clone());
        }
        while let Some(root) = frontier.pop() {
            for i in 0..n {
                let mut c = root.0.clone();
                self.reflect_root_coords(i, &mut c);
                let image = Root(c);
                if image.is_positive() && seen.insert(image.clone()) {
                    frontier.push(image);
                }
            }
            found.push(root);
        }
        found.sort_by(|a, b| a.height().cmp(&b.height()).then_with(|| b.0.cmp(&a.0)));
        found
    }
}

fn chain_gram(lens: &[i32]) -> Vec<Vec<i32>> {
    let n = lens.len();
    let mut g = vec![vec![0; n]; n];
    for i in 0..n {
        g[i][i] = lens[i];
        if i + 1 < n {
            let off = -lens[i].max(lens[i + 1]) / 2;
            g[i][i + 1] = off;
            g[i + 1][i] = off;
        }
    }
    g
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn derive_symmetrizer(cartan: &[Vec<i32>]) -> Result<Vec<i32>> {
    let n = cartan.len();
    // rational d as (num, den)
    let mut d: Vec<Option<(i64, i64)>> = vec![None; n];
    for start in 0..n {
        if d[start].is_some() {
            continue;
        }
        let mut comp = vec![start];
        d[start] = Some((1, 1));
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let (ni, di) = d[i].unwrap();
            for j in 0..n {
                if j == i || cartan[i][j] == 0 {
                    continue;
                }
                let num = ni * cartan[i][j] as i64;
                let den = di * cartan[j][i] as i64;
                let g = gcd(num, den);
                let (mut num, mut den) = (num / g, den / g);
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                match d[j] {
                    None => {
                        d[j] = Some((num, den));
                        comp.push(j);
                        stack.push(j);
                    }
                    Some((a, b)) => {
                        if a * den != num * b {
                            return Err(Error::InvalidCartan("matrix is not symmetrizable".into()));
                        }
                    }
                }
            }
        }
        let lcm = comp.iter().fold(1i64, |acc, &i| {
            let den = d[i].unwrap().1;
            acc / gcd(acc, den) * den
        });
        let ints: Vec<i64> = comp
            .iter()
            .map(|&i| d[i].unwrap().0 * (lcm / d[i].unwrap().1))
            .collect();
        let g = ints.iter().fold(0, |acc, &x| gcd(acc, x));
        for (&i, &x) in comp.iter().zip(&ints) {
            d[i] = Some((x / g, 1));
        }
    }
    Ok(d.into_iter().map(|x| x.unwrap().0 as i32).collect())
}

/// Exact determinant by fraction-free (Bareiss) elimination.
fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

fn adjugate(m: &[Vec<i64>]) -> Vec<i64> {
    let n = m.len();
    let mut adj = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            // cofactor C_ji goes to adj[i][j]
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| m[r][c]).collect())
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[i * n + j] = sign * determinant(&minor);
        }
    }
    adj
}
