//! Stochastic series expansion walker with directed-loop updates.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::vertex::{decode, encode, VertexTable};
use crate::chain::ChainSpec;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// Diagonal shift per bond, `C_b = J (s_a s_b + EPSILON)`.
pub(crate) const EPSILON: f64 = 0.25;

/// Loops longer than this multiple of the vertex-leg count are undone.
const MAX_LOOP_FACTOR: usize = 200;

#[derive(Debug, Clone, Copy)]
struct BondSites {
    a: u32,
    b: u32,
    table: u8,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct SweepStats {
    pub loop_legs: u64,
    pub loops: u64,
    pub aborted: u64,
}

pub(crate) struct Walker {
    beta: f64,
    bonds: Vec<BondSites>,
    tables: Vec<VertexTable>,
    site_dims: Vec<u8>,
    site_m: Vec<[f64; 3]>,
    shift_total: f64,
    state: Vec<u8>,
    ops: Vec<u32>,
    n_ops: usize,
    pub loops_per_sweep: usize,
    legs: Vec<u8>,
    link: Vec<u32>,
    vertex_pos: Vec<u32>,
    first: Vec<u32>,
    last: Vec<u32>,
    journal: Vec<(u32, u8)>,
    pub rng: ChaCha8Rng,
}

impl Walker {
    pub fn new(spec: &ChainSpec, beta: f64, mut rng: ChaCha8Rng) -> Self {
        let spins = spec.spins();
        let mut tables: Vec<VertexTable> = Vec::new();
        let mut keys: Vec<(u32, u32, u64)> = Vec::new();
        let mut bonds = Vec::new();
        let mut shift_total = 0.0;
        for bond in spec.bonds().iter() {
            let (sa, sb) = (spins[bond.i - 1], spins[bond.j - 1]);
            let key = (sa.twice(), sb.twice(), bond.coupling.to_bits());
            let idx = match keys.iter().position(|k| *k == key) {
                Some(i) => i,
                None => {
                    let shift = bond.coupling * (sa.value() * sb.value() + EPSILON);
                    tables.push(VertexTable::new(sa, sb, bond.coupling, shift));
                    keys.push(key);
                    keys.len() - 1
                }
            };
            shift_total += bond.coupling * (sa.value() * sb.value() + EPSILON);
            bonds.push(BondSites { a: (bond.i - 1) as u32, b: (bond.j - 1) as u32, table: idx as u8 });
        }
        let site_dims: Vec<u8> = spins.iter().map(|s| s.dim() as u8).collect();
        let site_m = spins
            .iter()
            .map(|s| {
                let mut m = [0.0; 3];
                for (k, v) in m.iter_mut().enumerate().take(s.dim()) {
                    *v = s.m_of(k);
                }
                m
            })
            .collect();
        let state = site_dims.iter().map(|&d| rng.gen_range(0..d)).collect();
        let n = spins.len();
        let cutoff = (4 * n).max(16);
        Self {
            beta,
            bonds,
            tables,
            site_dims,
            site_m,
            shift_total,
            state,
            ops: vec![0; cutoff],
            n_ops: 0,
            loops_per_sweep: n.max(1),
            legs: Vec::new(),
            link: Vec::new(),
            vertex_pos: Vec::new(),
            first: vec![NONE; n],
            last: vec![NONE; n],
            journal: Vec::new(),
            rng,
        }
    }

    pub fn cutoff(&self) -> usize {
        self.ops.len()
    }

    pub fn expansion_order(&self) -> usize {
        self.n_ops
    }

    /// Energy estimator of the current configuration.
    pub fn energy(&self) -> f64 {
        self.shift_total - self.n_ops as f64 / self.beta
    }

    /// Grow the cutoff to `n + n/3` when the expansion order approaches it.
    pub fn adjust_cutoff(&mut self) {
        let target = self.n_ops + self.n_ops / 3;
        if target > self.ops.len() {
            self.ops.resize(target, 0);
        }
    }

    pub fn sweep(&mut self) -> Result<SweepStats> {
        self.diagonal_update();
        self.build_links()?;
        let stats = self.loop_update();
        self.write_back();
        Ok(stats)
    }

    fn diagonal_update(&mut self) {
        let nb = self.bonds.len();
        let bf = self.beta * nb as f64;
        let cutoff = self.ops.len();
        for p in 0..cutoff {
            let op = self.ops[p];
            if op == 0 {
                let b = self.rng.gen_range(0..nb);
                let bs = self.bonds[b];
                let w = self.tables[bs.table as usize]
                    .diagonal_weight(self.state[bs.a as usize], self.state[bs.b as usize]);
                let accept = bf * w / (cutoff - self.n_ops) as f64;
                if w > 0.0 && self.rng.gen::<f64>() < accept {
                    self.ops[p] = 3 * b as u32 + 1;
                    self.n_ops += 1;
                }
            } else {
                let (b, kind) = ((op - 1) / 3, (op - 1) % 3);
                let bs = self.bonds[b as usize];
                if kind == 0 {
                    let w = self.tables[bs.table as usize]
                        .diagonal_weight(self.state[bs.a as usize], self.state[bs.b as usize]);
                    let accept = (cutoff - self.n_ops + 1) as f64 / (bf * w);
                    if self.rng.gen::<f64>() < accept {
                        self.ops[p] = 0;
                        self.n_ops -= 1;
                    }
                } else {
                    apply_offdiagonal(&mut self.state, bs, kind);
                }
            }
        }
    }

    fn build_links(&mut self) -> Result<()> {
        let nv = self.n_ops;
        self.legs.clear();
        self.legs.resize(4 * nv, 0);
        self.link.clear();
        self.link.resize(4 * nv, NONE);
        self.vertex_pos.clear();
        self.first.fill(NONE);
        self.last.fill(NONE);
        let mut state = self.state.clone();
        let mut v = 0usize;
        for (p, &op) in self.ops.iter().enumerate() {
            if op == 0 {
                continue;
            }
            let (b, kind) = ((op - 1) / 3, (op - 1) % 3);
            let bs = self.bonds[b as usize];
            let (a, bb) = (bs.a as usize, bs.b as usize);
            self.legs[4 * v] = state[a];
            self.legs[4 * v + 1] = state[bb];
            if kind != 0 {
                apply_offdiagonal(&mut state, bs, kind);
            }
            self.legs[4 * v + 2] = state[a];
            self.legs[4 * v + 3] = state[bb];
            let c = encode([self.legs[4 * v], self.legs[4 * v + 1], self.legs[4 * v + 2], self.legs[4 * v + 3]]);
            let w = self.tables[bs.table as usize].weights[c as usize];
            if w <= 0.0 {
                return Err(Error::SignViolation { bond: b as usize + 1, weight: w });
            }
            for (site, below, above) in [(a, 0, 2), (bb, 1, 3)] {
                let leg = (4 * v + below) as u32;
                if self.last[site] == NONE {
                    self.first[site] = leg;
                } else {
                    self.link[leg as usize] = self.last[site];
                    self.link[self.last[site] as usize] = leg;
                }
                self.last[site] = (4 * v + above) as u32;
            }
            self.vertex_pos.push(p as u32);
            v += 1;
        }
        for site in 0..self.first.len() {
            if self.first[site] != NONE {
                let (f, l) = (self.first[site], self.last[site]);
                self.link[f as usize] = l;
                self.link[l as usize] = f;
            }
        }
        Ok(())
    }

    #[inline]
    fn vertex_config(&self, v: usize) -> u8 {
        encode([self.legs[4 * v], self.legs[4 * v + 1], self.legs[4 * v + 2], self.legs[4 * v + 3]])
    }

    fn loop_update(&mut self) -> SweepStats {
        let mut stats = SweepStats::default();
        let n_legs = self.legs.len();
        if n_legs == 0 {
            return stats;
        }
        let max_len = MAX_LOOP_FACTOR * n_legs;
        for _ in 0..self.loops_per_sweep {
            let v0 = self.rng.gen_range(0..n_legs);
            let mut delta: i8 = if self.rng.gen::<bool>() { 1 } else { -1 };
            let dim = self.tables[self.table_of(v0 / 4)].dims[v0 % 2];
            let start = self.legs[v0] as i32 + delta as i32;
            if start < 0 || start >= dim as i32 {
                continue;
            }
            self.journal.clear();
            let mut leg = v0;
            let mut len = 0usize;
            loop {
                let v = leg / 4;
                let table = &self.tables[self.table_of(v)];
                let c = self.vertex_config(v);
                let exit = table.exit(c, leg % 4, delta, self.rng.gen::<f64>());
                self.journal.push((v as u32, c));
                let new = decode(exit.config);
                self.legs[4 * v..4 * v + 4].copy_from_slice(&new);
                len += 1;
                let out = 4 * v + exit.leg as usize;
                if out == v0 {
                    break;
                }
                leg = self.link[out] as usize;
                delta = exit.delta;
                if leg == v0 {
                    break;
                }
                if len > max_len {
                    for &(jv, jc) in self.journal.iter().rev() {
                        let l = decode(jc);
                        self.legs[4 * jv as usize..4 * jv as usize + 4].copy_from_slice(&l);
                    }
                    stats.aborted += 1;
                    break;
                }
            }
            stats.loops += 1;
            stats.loop_legs += len as u64;
        }
        stats
    }

    #[inline]
    fn table_of(&self, v: usize) -> usize {
        let op = self.ops[self.vertex_pos[v] as usize];
        self.bonds[((op - 1) / 3) as usize].table as usize
    }

    fn write_back(&mut self) {
        for v in 0..self.vertex_pos.len() {
            let p = self.vertex_pos[v] as usize;
            let b = (self.ops[p] - 1) / 3;
            let (below, above) = (self.legs[4 * v], self.legs[4 * v + 2]);
            let kind = if below == above {
                0
            } else if above == below + 1 {
                1
            } else {
                2
            };
            self.ops[p] = 3 * b + 1 + kind;
        }
        for site in 0..self.state.len() {
            self.state[site] = if self.first[site] != NONE {
                self.legs[self.first[site] as usize]
            } else {
                self.rng.gen_range(0..self.site_dims[site])
            };
        }
    }

    /// Time average of `m_i m_j` over the propagated states, for each pair
    /// of 0-based sites.
    pub fn measure_szsz(&self, pairs: &[(usize, usize)], out: &mut [f64]) {
        let mut state = self.state.clone();
        out.fill(0.0);
        let mut count = 0usize;
        for &op in &self.ops {
            if op == 0 {
                continue;
            }
            let (b, kind) = ((op - 1) / 3, (op - 1) % 3);
            if kind != 0 {
                apply_offdiagonal(&mut state, self.bonds[b as usize], kind);
            }
            self.accumulate(&state, pairs, out);
            count += 1;
        }
        if count == 0 {
            self.accumulate(&state, pairs, out);
            count = 1;
        }
        for o in out.iter_mut() {
            *o /= count as f64;
        }
    }

    #[inline]
    fn accumulate(&self, state: &[u8], pairs: &[(usize, usize)], out: &mut [f64]) {
        for (o, &(i, j)) in out.iter_mut().zip(pairs) {
            *o += self.site_m[i][state[i] as usize] * self.site_m[j][state[j] as usize];
        }
    }
}

/// `kind` 1: `k_a += 1, k_b -= 1`; `kind` 2: the reverse.
#[inline]
fn apply_offdiagonal(state: &mut [u8], bs: BondSites, kind: u32) {
    if kind == 1 {
        state[bs.a as usize] += 1;
        state[bs.b as usize] -= 1;
    } else {
        state[bs.a as usize] -= 1;
        state[bs.b as usize] += 1;
    }
}
