//! A small DPLL engine: two watched literals, chronological backtracking,
//! and enumeration of every total satisfying assignment.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn pos(v: u32) -> Lit {
        Lit(v << 1)
    }

    pub fn neg(v: u32) -> Lit {
        Lit(v << 1 | 1)
    }

    pub fn var(self) -> u32 {
        self.0 >> 1
    }

    fn is_neg(self) -> bool {
        self.0 & 1 == 1
    }

    fn code(self) -> usize {
        self.0 as usize
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;

    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutOfBudget;

struct Level {
    trail_len: usize,
    decision: Lit,
    flipped: bool,
}

#[derive(Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    units: Vec<Lit>,
    watches: Vec<Vec<usize>>,
    values: Vec<Option<bool>>,
    trail: Vec<Lit>,
    levels: Vec<Level>,
    qhead: usize,
    unsat: bool,
    pub steps: u64,
}

impl Solver {
    pub fn new() -> Self {
        Solver::default()
    }

    pub fn new_var(&mut self) -> u32 {
        self.values.push(None);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        (self.values.len() - 1) as u32
    }

    /// Adds a clause; must be called before the search starts.
    pub fn add_clause(&mut self, lits: impl IntoIterator<Item = Lit>) {
        let mut c: Vec<Lit> = lits.into_iter().collect();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        match c.len() {
            0 => self.unsat = true,
            1 => self.units.push(c[0]),
            _ => {
                let idx = self.clauses.len();
                self.watches[c[0].code()].push(idx);
                self.watches[c[1].code()].push(idx);
                self.clauses.push(c);
            }
        }
    }

    pub fn value(&self, v: u32) -> Option<bool> {
        self.values[v as usize]
    }

    fn lit_value(&self, l: Lit) -> Option<bool> {
        self.values[l.var() as usize].map(|b| b != l.is_neg())
    }

    fn assign(&mut self, l: Lit) {
        self.values[l.var() as usize] = Some(!l.is_neg());
        self.trail.push(l);
    }

    fn propagate(&mut self) -> bool {
        while self.qhead < self.trail.len() {
            let false_lit = !self.trail[self.qhead];
            self.qhead += 1;
            let mut ws = std::mem::take(&mut self.watches[false_lit.code()]);
            let (mut i, mut j) = (0, 0);
            let mut conflict = false;
            while i < ws.len() {
                let ci = ws[i];
                i += 1;
                let c = &mut self.clauses[ci];
                if c[0] == false_lit {
                    c.swap(0, 1);
                }
                let first = c[0];
                let first_value = self.values[first.var() as usize].map(|b| b != first.is_neg());
                if first_value == Some(true) {
                    ws[j] = ci;
                    j += 1;
                    continue;
                }
                let mut moved = false;
                for k in 2..c.len() {
                    let l = c[k];
                    if self.values[l.var() as usize].map(|b| b != l.is_neg()) != Some(false) {
                        c.swap(1, k);
                        self.watches[l.code()].push(ci);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                ws[j] = ci;
                j += 1;
                if first_value == Some(false) {
                    conflict = true;
                    while i < ws.len() {
                        ws[j] = ws[i];
                        i += 1;
                        j += 1;
                    }
                    break;
                }
                self.values[first.var() as usize] = Some(!first.is_neg());
                self.trail.push(first);
            }
            ws.truncate(j);
            self.watches[false_lit.code()] = ws;
            if conflict {
                return false;
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        for l in self.trail.drain(len..) {
            self.values[l.var() as usize] = None;
        }
        self.qhead = self.qhead.min(len);
    }

    /// Flips the most recent unflipped decision; false when none is left.
    fn backtrack(&mut self) -> bool {
        while let Some(level) = self.levels.pop() {
            self.undo_to(level.trail_len);
            if !level.flipped {
                self.levels.push(Level {
                    trail_len: self.trail.len(),
                    decision: !level.decision,
                    flipped: true,
                });
                self.assign(!level.decision);
                return true;
            }
        }
        false
    }

    /// Visits every total satisfying assignment reachable by deciding the
    /// variables of `order` first (then all others), until `visit` returns
    /// false. Returns whether the enumeration ran to completion.
    pub fn enumerate(
        &mut self,
        order: &[u32],
        budget: u64,
        mut visit: impl FnMut(&Solver) -> bool,
    ) -> Result<bool, OutOfBudget> {
        if self.unsat {
            return Ok(true);
        }
        for u in std::mem::take(&mut self.units) {
            match self.lit_value(u) {
                Some(true) => {}
                Some(false) => return Ok(true),
                None => self.assign(u),
            }
        }
        loop {
            if !self.propagate() {
                if !self.backtrack() {
                    return Ok(true);
                }
                continue;
            }
            let unassigned = |v: &u32| self.values[*v as usize].is_none();
            let next = order
                .iter()
                .copied()
                .find(unassigned)
                .or_else(|| (0..self.values.len() as u32).find(unassigned));
            match next {
                None => {
                    if !visit(self) {
                        return Ok(false);
                    }
                    if !self.backtrack() {
                        return Ok(true);
                    }
                }
                Some(v) => {
                    self.steps += 1;
                    if self.steps > budget {
                        return Err(OutOfBudget);
                    }
                    self.levels.push(Level {
                        trail_len: self.trail.len(),
                        decision: Lit::neg(v),
                        flipped: false,
                    });
                    self.assign(Lit::neg(v));
                }
            }
        }
    }
}
