//! Finite posets, n-Vee construction and validation, suspension at a top
//! element, and the two edge-weighted distances used throughout: the
//! unoriented shortest-path metric on the Hasse diagram and the ascending
//! (monotone-path) displacement cost that prices translations.

use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense vertex index. In a suspended poset the top element is always the
/// last index.
pub type Vertex = usize;

/// Subset of vertices as a bitmask. Posets here never exceed 64 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(1 << v)
    }

    pub fn from_iter<I: IntoIterator<Item = Vertex>>(it: I) -> Self {
        let mut s = Self::EMPTY;
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: Vertex) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: Vertex) {
        self.0 &= !(1 << v);
    }

    pub fn contains(self, v: Vertex) -> bool {
        self.0 >> v & 1 == 1
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = Vertex> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<Vertex> {
        self.iter().collect()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Democratic edge weights: `a` on the Hasse edges of P, `b` on the edges
/// into the suspension point.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Weight {
    pub a: u64,
    pub b: u64,
}

impl Weight {
    pub fn new(a: u64, b: u64) -> Result<Self, PosetError> {
        if a == 0 || b == 0 {
            return Err(PosetError::ZeroWeight);
        }
        Ok(Weight { a, b })
    }
}

/// Branch structure of an n-Vee: totally ordered maximal intervals meeting
/// only at the unique minimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NVeeShape {
    /// T_i = |[m, M_i]| - 1 for each branch, in vertex order.
    pub branch_lengths: Vec<usize>,
    /// Vertices of each branch in ascending order, excluding the minimum.
    pub branches: Vec<Vec<Vertex>>,
    /// Index of a branch of maximal length (the first one under ties).
    pub longest: usize,
    /// True iff exactly one branch attains the maximal length.
    pub asymmetric: bool,
}

impl NVeeShape {
    /// max{T_i : i != longest}; equals T_{i0} when there is a single branch.
    pub fn second_length(&self) -> usize {
        self.branch_lengths
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.longest)
            .map(|(_, &t)| t)
            .max()
            .unwrap_or(self.branch_lengths[self.longest])
    }

    pub fn longest_length(&self) -> usize {
        self.branch_lengths[self.longest]
    }
}

/// Why a poset fails to be an n-Vee. The numbering follows the defining
/// conditions: (1) unique minimum, (2) maximal intervals totally ordered,
/// (3) branches intersect only in the minimum.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NVeeRejection {
    #[error("condition (1) fails: poset has {0} minimal elements")]
    NoUniqueMinimum(usize),
    #[error("condition (2) fails: [m, {maximal}] is not totally ordered")]
    IntervalNotChain { maximal: Vertex },
    #[error("condition (3) fails: branches of {0} and {1} share a vertex above m")]
    BranchesOverlap(Vertex, Vertex),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("an n-Vee needs at least one branch")]
    EmptyBranches,
    #[error("weight components must be positive")]
    ZeroWeight,
    #[error("vertex {0} out of range for poset with {1} elements")]
    VertexOutOfRange(Vertex, usize),
    #[error("cover digraph has a cycle through vertex {0}")]
    CoverCycle(Vertex),
    #[error("cover ({0}, {1}) is implied by a longer path; covers must be transitively reduced")]
    NotReduced(Vertex, Vertex),
    #[error("operation requires a suspended poset")]
    NotSuspended,
    #[error("operation requires an unsuspended poset")]
    Suspended,
    #[error("operation requires an n-Vee: {0}")]
    NotNVee(NVeeRejection),
    #[error("poset too large for brute force ({0} vertices, cap {1})")]
    CapExceeded(usize, usize),
    #[error("poset must have at most 64 vertices")]
    TooManyVertices,
}

/// A finite poset given by its Hasse covers, optionally suspended at a top
/// element, with democratic weights and (when applicable) n-Vee structure.
///
/// Vertex order is canonical for built n-Vees: m = 0, branch 1 ascending,
/// branch 2 ascending, ..., suspension point last.
#[derive(Clone)]
pub struct Poset {
    n: usize,
    covers: Vec<(Vertex, Vertex)>,
    up_adj: Vec<Vec<Vertex>>,
    down_adj: Vec<Vec<Vertex>>,
    /// up_set[x] = {y : x <= y}, including x.
    up_set: Vec<VertexSet>,
    suspended: bool,
    weight: Weight,
    shape: Option<NVeeShape>,
    /// Shortest unoriented weighted path matrix on the Hasse diagram.
    dist: Vec<Vec<u64>>,
    /// ascent[x][y] = longest monotone path cost for x <= y, else u64::MAX.
    ascent: Vec<Vec<u64>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Poset")
            .field("n", &self.n)
            .field("covers", &self.covers)
            .field("suspended", &self.suspended)
            .field("weight", &self.weight)
            .finish()
    }
}

impl Poset {
    /// Builds a suspended n-Vee with the given branch lengths, canonically
    /// numbered. Branch i occupies a contiguous ascending index range.
    pub fn nvee(branch_lengths: &[usize], weight: (u64, u64)) -> Result<Poset, PosetError> {
        if branch_lengths.is_empty() {
            return Err(PosetError::EmptyBranches);
        }
        if branch_lengths.iter().any(|&t| t == 0) {
            return Err(PosetError::EmptyBranches);
        }
        let weight = Weight::new(weight.0, weight.1)?;
        let total: usize = branch_lengths.iter().sum();
        let n_base = 1 + total;
        if n_base + 1 > 64 {
            return Err(PosetError::TooManyVertices);
        }
        let mut covers = Vec::new();
        let mut next = 1;
        let mut branches = Vec::new();
        for &t in branch_lengths {
            let mut branch = Vec::with_capacity(t);
            let mut prev = 0; // m
            for _ in 0..t {
                covers.push((prev, next));
                branch.push(next);
                prev = next;
                next += 1;
            }
            branches.push(branch);
        }
        let longest = branch_lengths
            .iter()
            .enumerate()
            .max_by_key(|&(i, &t)| (t, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .unwrap();
        let max_len = branch_lengths[longest];
        let asymmetric = branch_lengths.iter().filter(|&&t| t == max_len).count() == 1;
        let shape = NVeeShape {
            branch_lengths: branch_lengths.to_vec(),
            branches,
            longest,
            asymmetric,
        };
        let base = Poset::assemble(n_base, covers, false, weight, Some(shape))?;
        base.suspend_with(weight)
    }

    /// Builds an unsuspended poset from explicit covers. The cover digraph
    /// must be acyclic and transitively reduced.
    pub fn from_covers(n: usize, covers: &[(Vertex, Vertex)]) -> Result<Poset, PosetError> {
        if n > 64 {
            return Err(PosetError::TooManyVertices);
        }
        let weight = Weight { a: 1, b: 1 };
        Poset::assemble(n, covers.to_vec(), false, weight, None)
    }

    /// Adds a top element above every maximal element, with weight b on the
    /// new edges.
    pub fn suspend(&self, weight: (u64, u64)) -> Result<Poset, PosetError> {
        if self.suspended {
            return Err(PosetError::Suspended);
        }
        let weight = Weight::new(weight.0, weight.1)?;
        self.suspend_with(weight)
    }

    fn suspend_with(&self, weight: Weight) -> Result<Poset, PosetError> {
        if self.n + 1 > 64 {
            return Err(PosetError::TooManyVertices);
        }
        let inf = self.n;
        let mut covers = self.covers.clone();
        for x in 0..self.n {
            if self.up_adj[x].is_empty() {
                covers.push((x, inf));
            }
        }
        Poset::assemble(self.n + 1, covers, true, weight, self.shape.clone())
    }

    fn assemble(
        n: usize,
        covers: Vec<(Vertex, Vertex)>,
        suspended: bool,
        weight: Weight,
        shape: Option<NVeeShape>,
    ) -> Result<Poset, PosetError> {
        let mut up_adj = vec![Vec::new(); n];
        let mut down_adj = vec![Vec::new(); n];
        for &(x, y) in &covers {
            if x >= n {
                return Err(PosetError::VertexOutOfRange(x, n));
            }
            if y >= n {
                return Err(PosetError::VertexOutOfRange(y, n));
            }
            up_adj[x].push(y);
            down_adj[y].push(x);
        }
        for adj in up_adj.iter_mut().chain(down_adj.iter_mut()) {
            adj.sort_unstable();
            adj.dedup();
        }

        // Reachability by DFS in topological sweep; also detects cycles.
        let order = topo_order(n, &up_adj)?;
        let mut up_set = vec![VertexSet::EMPTY; n];
        for &x in order.iter().rev() {
            let mut s = VertexSet::singleton(x);
            for &y in &up_adj[x] {
                s = s.union(up_set[y]);
            }
            up_set[x] = s;
        }

        // Transitive reduction check: a cover must not be implied by a 2-path.
        for &(x, y) in &covers {
            for &z in &up_adj[x] {
                if z != y && up_set[z].contains(y) {
                    return Err(PosetError::NotReduced(x, y));
                }
            }
        }

        let mut poset = Poset {
            n,
            covers,
            up_adj,
            down_adj,
            up_set,
            suspended,
            weight,
            shape,
            dist: Vec::new(),
            ascent: Vec::new(),
        };
        poset.dist = poset.compute_shortest_paths();
        poset.ascent = poset.compute_ascents();
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn is_suspended(&self) -> bool {
        self.suspended
    }

    pub fn weight(&self) -> Weight {
        self.weight
    }

    pub fn covers(&self) -> &[(Vertex, Vertex)] {
        &self.covers
    }

    /// The suspension point, when present.
    pub fn infinity(&self) -> Option<Vertex> {
        self.suspended.then(|| self.n - 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        0..self.n
    }

    /// Vertices of P, excluding the suspension point.
    pub fn base_vertices(&self) -> impl Iterator<Item = Vertex> {
        0..if self.suspended { self.n - 1 } else { self.n }
    }

    pub fn base_len(&self) -> usize {
        if self.suspended {
            self.n - 1
        } else {
            self.n
        }
    }

    pub fn base_set(&self) -> VertexSet {
        VertexSet::from_iter(self.base_vertices())
    }

    pub fn leq(&self, x: Vertex, y: Vertex) -> bool {
        self.up_set[x].contains(y)
    }

    /// {y : x <= y}, including x.
    pub fn up_set(&self, x: Vertex) -> VertexSet {
        self.up_set[x]
    }

    /// {y : y <= x}, including x.
    pub fn down_set(&self, x: Vertex) -> VertexSet {
        VertexSet::from_iter(self.vertices().filter(|&y| self.leq(y, x)))
    }

    pub fn covers_of(&self, x: Vertex) -> &[Vertex] {
        &self.up_adj[x]
    }

    pub fn covered_by(&self, x: Vertex) -> &[Vertex] {
        &self.down_adj[x]
    }

    pub fn maximal_elements(&self) -> Vec<Vertex> {
        self.base_vertices()
            .filter(|&x| {
                self.up_adj[x].is_empty() || (self.suspended && self.up_adj[x] == [self.n - 1])
            })
            .collect()
    }

    pub fn minimal_elements(&self) -> Vec<Vertex> {
        self.vertices().filter(|&x| self.down_adj[x].is_empty()).collect()
    }

    /// The interval [x, y] = {p : x <= p <= y}.
    pub fn interval(&self, x: Vertex, y: Vertex) -> VertexSet {
        VertexSet::from_iter(self.up_set[x].iter().filter(|&p| self.leq(p, y)))
    }

    fn edge_weight(&self, _x: Vertex, y: Vertex) -> u64 {
        if self.suspended && y == self.n - 1 {
            self.weight.b
        } else {
            self.weight.a
        }
    }

    fn compute_shortest_paths(&self) -> Vec<Vec<u64>> {
        let n = self.n;
        let mut d = vec![vec![u64::MAX; n]; n];
        // Unoriented adjacency; Dijkstra from every source is cheap at this size.
        let mut adj: Vec<Vec<(Vertex, u64)>> = vec![Vec::new(); n];
        for &(x, y) in &self.covers {
            let w = self.edge_weight(x, y);
            adj[x].push((y, w));
            adj[y].push((x, w));
        }
        for s in 0..n {
            d[s][s] = 0;
            let mut heap = std::collections::BinaryHeap::new();
            heap.push(std::cmp::Reverse((0u64, s)));
            while let Some(std::cmp::Reverse((du, u))) = heap.pop() {
                if du > d[s][u] {
                    continue;
                }
                for &(v, w) in &adj[u] {
                    let dv = du + w;
                    if dv < d[s][v] {
                        d[s][v] = dv;
                        heap.push(std::cmp::Reverse((dv, v)));
                    }
                }
            }
        }
        d
    }

    fn compute_ascents(&self) -> Vec<Vec<u64>> {
        let n = self.n;
        let mut asc = vec![vec![u64::MAX; n]; n];
        let order = topo_order(n, &self.up_adj).expect("validated acyclic");
        // Longest monotone path from each source, in topological order.
        for &s in &order {
            asc[s][s] = 0;
        }
        for &u in &order {
            for s in 0..n {
                if asc[s][u] == u64::MAX {
                    continue;
                }
                for &v in &self.up_adj[u] {
                    let c = asc[s][u] + self.edge_weight(u, v);
                    if asc[s][v] == u64::MAX || c > asc[s][v] {
                        asc[s][v] = c;
                    }
                }
            }
        }
        asc
    }

    /// Length of the shortest unoriented weighted path in the Hasse diagram.
    pub fn distance(&self, x: Vertex, y: Vertex) -> u64 {
        self.dist[x][y]
    }

    /// Displacement cost of moving x up to y: the longest monotone path cost.
    /// On an n-Vee this is the unique in-branch path for x != m, and the
    /// longest-branch route for m, so the all-to-top translation is priced at
    /// a*T_max + b as the translation lemmas require. Panics if !(x <= y).
    pub fn ascent(&self, x: Vertex, y: Vertex) -> u64 {
        debug_assert!(self.leq(x, y), "ascent requires x <= y");
        self.ascent[x][y]
    }

    /// n-Vee structure, if this poset is one (cached from construction or a
    /// previous validation).
    pub fn shape(&self) -> Option<&NVeeShape> {
        self.shape.as_ref()
    }

    pub fn require_shape(&self) -> Result<NVeeShape, PosetError> {
        match &self.shape {
            Some(s) => Ok(s.clone()),
            None => self.validate_nvee().map_err(PosetError::NotNVee),
        }
    }

    /// Checks conditions (1)-(3) for being an n-Vee and returns the branch
    /// structure, or reports which condition fails.
    pub fn validate_nvee(&self) -> Result<NVeeShape, NVeeRejection> {
        let minimals = self.minimal_elements();
        let base_minimals: Vec<Vertex> = minimals
            .into_iter()
            .filter(|&x| Some(x) != self.infinity())
            .collect();
        if base_minimals.len() != 1 {
            return Err(NVeeRejection::NoUniqueMinimum(base_minimals.len()));
        }
        let m = base_minimals[0];
        let maximals = self.maximal_elements();
        let mut branches: Vec<Vec<Vertex>> = Vec::new();
        for &top in &maximals {
            // [m, top] must be a chain.
            let interval = self.interval(m, top);
            let mut elems = interval.to_vec();
            elems.sort_unstable_by_key(|&p| interval.iter().filter(|&q| self.leq(q, p)).count());
            for w in elems.windows(2) {
                if !self.leq(w[0], w[1]) {
                    return Err(NVeeRejection::IntervalNotChain { maximal: top });
                }
            }
            branches.push(elems.into_iter().filter(|&p| p != m).collect());
        }
        for i in 0..branches.len() {
            for j in i + 1..branches.len() {
                if branches[i].iter().any(|v| branches[j].contains(v)) {
                    return Err(NVeeRejection::BranchesOverlap(maximals[i], maximals[j]));
                }
            }
        }
        let branch_lengths: Vec<usize> = branches.iter().map(|b| b.len()).collect();
        let longest = branch_lengths
            .iter()
            .enumerate()
            .max_by_key(|&(i, &t)| (t, std::cmp::Reverse(i)))
            .map(|(i, _)| i)
            .unwrap();
        let max_len = branch_lengths[longest];
        let asymmetric = branch_lengths.iter().filter(|&&t| t == max_len).count() == 1;
        Ok(NVeeShape {
            branch_lengths,
            branches,
            longest,
            asymmetric,
        })
    }

    /// Attaches the shape discovered by `validate_nvee`, enabling the n-Vee
    /// operations on a poset parsed from a general covers file.
    pub fn detect_shape(mut self) -> Result<Poset, PosetError> {
        match self.validate_nvee() {
            Ok(shape) => {
                self.shape = Some(shape);
                Ok(self)
            }
            Err(r) => Err(PosetError::NotNVee(r)),
        }
    }

    /// The unique minimal base vertex, when there is exactly one (always the
    /// case for n-Vees; vertex 0 in canonical numbering).
    pub fn minimum(&self) -> Option<Vertex> {
        let mins: Vec<Vertex> = self
            .minimal_elements()
            .into_iter()
            .filter(|&x| Some(x) != self.infinity())
            .collect();
        match mins.as_slice() {
            [m] => Some(*m),
            _ => None,
        }
    }

    /// Branch index of a vertex of an n-Vee; None for m and the suspension
    /// point.
    pub fn branch_of(&self, x: Vertex) -> Option<usize> {
        let shape = self.shape.as_ref()?;
        shape.branches.iter().position(|b| b.contains(&x))
    }

    /// Position of x within its branch, counting from 1; m has height 0.
    pub fn branch_height(&self, x: Vertex) -> Option<usize> {
        if Some(x) == self.minimum() {
            return Some(0);
        }
        let shape = self.shape.as_ref()?;
        for b in &shape.branches {
            if let Some(pos) = b.iter().position(|&v| v == x) {
                return Some(pos + 1);
            }
        }
        None
    }

    /// The set {p : Lambda p = p for every inflationary monotone self-map}.
    ///
    /// Computed by brute force over all translations; on a suspended poset
    /// the suspension point is ignored and every base vertex can be moved,
    /// so the result is empty. The cap bounds the enumeration.
    pub fn fixed_points(&self, cap: usize) -> Result<VertexSet, PosetError> {
        if self.n > cap {
            return Err(PosetError::CapExceeded(self.n, cap));
        }
        let mut fixed = self.base_set();
        let mut assignment: Vec<Vertex> = (0..self.n).collect();
        self.for_each_translation_rec(0, &mut assignment, &mut |map| {
            for x in 0..self.n {
                if map[x] != x {
                    fixed.remove(x);
                }
            }
        });
        Ok(fixed)
    }

    /// Enumerates all inflationary monotone self-maps (fixing the suspension
    /// point when suspended) and feeds each to the visitor.
    pub(crate) fn for_each_translation_rec(
        &self,
        x: Vertex,
        assignment: &mut Vec<Vertex>,
        visit: &mut impl FnMut(&[Vertex]),
    ) {
        if x == self.n {
            visit(assignment);
            return;
        }
        if Some(x) == self.infinity() {
            assignment[x] = x;
            self.for_each_translation_rec(x + 1, assignment, visit);
            return;
        }
        for y in self.up_set[x].iter() {
            // Monotone against already-assigned smaller vertices: it is
            // enough to check the covered neighbours, which precede x in
            // index order only if the input ordering is topological; check
            // all assigned predecessors to stay order-agnostic.
            let ok = (0..x)
                .filter(|&z| self.leq(z, x))
                .all(|z| self.leq(assignment[z], y));
            if ok {
                assignment[x] = y;
                self.for_each_translation_rec(x + 1, assignment, visit);
            }
        }
        assignment[x] = x;
    }
}

fn topo_order(n: usize, up_adj: &[Vec<Vertex>]) -> Result<Vec<Vertex>, PosetError> {
    let mut indeg = vec![0usize; n];
    for adj in up_adj {
        for &y in adj {
            indeg[y] += 1;
        }
    }
    let mut queue: Vec<Vertex> = (0..n).filter(|&x| indeg[x] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(x) = queue.pop() {
        order.push(x);
        for &y in &up_adj[x] {
            indeg[y] -= 1;
            if indeg[y] == 0 {
                queue.push(y);
            }
        }
    }
    if order.len() != n {
        let stuck = (0..n).find(|&x| indeg[x] > 0).unwrap();
        return Err(PosetError::CoverCycle(stuck));
    }
    Ok(order)
}

/// On-disk poset description: either an n-Vee given by branch lengths or a
/// general poset given by covers. General posets suspend on load when a
/// weight is present.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum PosetSpec {
    NVee {
        branches: Vec<usize>,
        weight: [u64; 2],
    },
    General {
        elements: usize,
        covers: Vec<[usize; 2]>,
        #[serde(skip_serializing_if = "Option::is_none")]
        weight: Option<[u64; 2]>,
    },
}

impl PosetSpec {
    pub fn parse(text: &str) -> Result<PosetSpec, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Builds the poset. n-Vees come out suspended and canonically numbered;
    /// general posets are suspended when they carry a weight.
    pub fn build(&self) -> Result<Poset, PosetError> {
        match self {
            PosetSpec::NVee { branches, weight } => Poset::nvee(branches, (weight[0], weight[1])),
            PosetSpec::General {
                elements,
                covers,
                weight,
            } => {
                let pairs: Vec<(usize, usize)> = covers.iter().map(|c| (c[0], c[1])).collect();
                let p = Poset::from_covers(*elements, &pairs)?;
                match weight {
                    Some(w) => p.suspend((w[0], w[1])),
                    None => Ok(p),
                }
            }
        }
    }
}
