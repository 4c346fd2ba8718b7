//! Bond vertex weights and heat-bath directed-loop exit probabilities.
//!
//! Legs: 0 = (a, below), 1 = (b, below), 2 = (a, above), 3 = (b, above).
//! Leg states are local indices `k` (`m = s - k`), so a vertex config is
//! `l0 + 3 l1 + 9 l2 + 27 l3`.

use crate::spin::{ladder_element, SpinValue};

pub(crate) const N_CONFIGS: usize = 81;

#[inline]
pub(crate) fn encode(l: [u8; 4]) -> u8 {
    l[0] + 3 * l[1] + 9 * l[2] + 27 * l[3]
}

#[inline]
pub(crate) fn decode(c: u8) -> [u8; 4] {
    [c % 3, (c / 3) % 3, (c / 9) % 3, c / 27]
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Exit {
    pub cumulative: f64,
    pub leg: u8,
    pub config: u8,
    pub delta: i8,
}

/// Weights and transition tables of one bond type `(s_a, s_b, J)`.
#[derive(Debug, Clone)]
pub(crate) struct VertexTable {
    pub dims: [u8; 2],
    pub weights: [f64; N_CONFIGS],
    /// `exits[(config * 4 + entrance) * 2 + (delta > 0)]`
    exits: Vec<[Exit; 4]>,
}

impl VertexTable {
    /// Vertex weights of `-H_b + C` after sublattice rotation:
    /// diagonal `C - J m_a m_b`, off-diagonal `J/2 ⟨S±⟩⟨S∓⟩` (positive).
    pub fn new(sa: SpinValue, sb: SpinValue, coupling: f64, shift: f64) -> Self {
        let dims = [sa.dim() as u8, sb.dim() as u8];
        let mut weights = [0.0; N_CONFIGS];
        for (c, w) in weights.iter_mut().enumerate() {
            let l = decode(c as u8);
            if l[0] >= dims[0] || l[2] >= dims[0] || l[1] >= dims[1] || l[3] >= dims[1] {
                continue;
            }
            let (ma, mb) = (sa.m_of(l[0] as usize), sb.m_of(l[1] as usize));
            let (ma2, mb2) = (sa.m_of(l[2] as usize), sb.m_of(l[3] as usize));
            if l[0] == l[2] && l[1] == l[3] {
                *w = shift - coupling * ma * mb;
            } else if (ma2 - ma).abs() == 1.0 && ma2 - ma == mb - mb2 {
                *w = 0.5 * coupling * ladder_element(sa, ma, ma2) * ladder_element(sb, mb, mb2);
            }
        }
        let mut table = Self { dims, weights, exits: vec![[Exit::default(); 4]; N_CONFIGS * 8] };
        table.build_exits();
        table
    }

    #[inline]
    fn leg_dim(&self, leg: usize) -> u8 {
        self.dims[leg % 2]
    }

    fn build_exits(&mut self) {
        for c in 0..N_CONFIGS {
            if self.weights[c] <= 0.0 {
                continue;
            }
            let legs = decode(c as u8);
            for entrance in 0..4 {
                for (di, delta) in [(0usize, -1i32), (1, 1)] {
                    let mut mid = legs.map(i32::from);
                    mid[entrance] += delta;
                    if mid[entrance] < 0 || mid[entrance] >= self.leg_dim(entrance) as i32 {
                        continue;
                    }
                    let mut exits = [Exit::default(); 4];
                    let mut total = 0.0;
                    for (x, exit) in exits.iter_mut().enumerate() {
                        let dx = if x / 2 == entrance / 2 { -delta } else { delta };
                        let mut out = mid;
                        out[x] += dx;
                        let w = if out[x] < 0 || out[x] >= self.leg_dim(x) as i32 {
                            0.0
                        } else {
                            self.weights[encode(out.map(|v| v as u8)) as usize]
                        };
                        total += w;
                        *exit = Exit {
                            cumulative: total,
                            leg: x as u8,
                            config: if w > 0.0 { encode(out.map(|v| v as u8)) } else { 0 },
                            delta: dx as i8,
                        };
                    }
                    // the bounce always leads back to `c`, so total > 0
                    for exit in exits.iter_mut() {
                        exit.cumulative /= total;
                    }
                    exits[3].cumulative = 1.0;
                    self.exits[(c * 4 + entrance) * 2 + di] = exits;
                }
            }
        }
    }

    /// Pick the exit for a head entering `config` at `entrance` with change
    /// `delta`, given a uniform `r ∈ [0, 1)`.
    #[inline]
    pub fn exit(&self, config: u8, entrance: usize, delta: i8, r: f64) -> Exit {
        let row = &self.exits[(config as usize * 4 + entrance) * 2 + (delta > 0) as usize];
        for e in row {
            if r < e.cumulative {
                return *e;
            }
        }
        row[3]
    }

    #[inline]
    pub fn diagonal_weight(&self, ka: u8, kb: u8) -> f64 {
        self.weights[encode([ka, kb, ka, kb]) as usize]
    }

    /// Probability of each exit (not cumulative), for tests.
    #[cfg(test)]
    pub fn exit_probabilities(&self, config: u8, entrance: usize, delta: i8) -> [(Exit, f64); 4] {
        let row = &self.exits[(config as usize * 4 + entrance) * 2 + (delta > 0) as usize];
        let mut prev = 0.0;
        row.map(|e| {
            let p = e.cumulative - prev;
            prev = e.cumulative;
            (e, p)
        })
    }
}
