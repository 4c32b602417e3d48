use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;

/// Caps for [`random_formula`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorParams {
    pub seed: u64,
    pub max_pred_quantifiers: usize,
    pub max_ind_quantifiers: usize,
    pub max_free_predicates: usize,
    pub max_depth: usize,
    pub identity: bool,
    /// Maximum number of identity atoms.
    pub count_cap: usize,
}

impl GeneratorParams {
    /// Pure sentences with identity: no free predicates.
    pub fn pure(seed: u64) -> Self {
        GeneratorParams {
            seed,
            max_pred_quantifiers: 2,
            max_ind_quantifiers: 3,
            max_free_predicates: 0,
            max_depth: 4,
            identity: true,
            count_cap: 2,
        }
    }

    /// Identity-free sentences over at most two predicate symbols.
    pub fn identity_free(seed: u64) -> Self {
        GeneratorParams {
            seed,
            max_pred_quantifiers: 1,
            max_ind_quantifiers: 3,
            max_free_predicates: 1,
            max_depth: 4,
            identity: false,
            count_cap: 0,
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GeneratorParams {
            seed,
            ..self.clone()
        }
    }
}

const IND_NAMES: [&str; 6] = ["x", "y", "z", "u", "v", "w"];
const PRED_VARS: [&str; 4] = ["X", "Y", "Z", "W"];
const FREE_PREDS: [&str; 4] = ["P", "Q", "R", "S"];

struct Gen<'a> {
    rng: ChaCha8Rng,
    p: &'a GeneratorParams,
    pred_left: usize,
    ind_left: usize,
    identity_left: usize,
    inds: Vec<&'static str>,
    preds: Vec<&'static str>,
    free: usize,
}

impl Gen<'_> {
    fn formula(&mut self, depth: usize) -> Formula {
        let mut choices: Vec<(u32, u8)> = vec![(1, 0)];
        // Without an individual in reach only constants remain.
        let stuck = self.inds.is_empty() && self.ind_left == 0;
        if depth > 0 && !stuck {
            choices.extend([(3, 1), (3, 2), (1, 3), (1, 4), (1, 5)]);
            if self.ind_left > 0 && self.inds.len() < IND_NAMES.len() {
                choices.push((if self.inds.is_empty() { 12 } else { 5 }, 6));
            }
            if self.pred_left > 0 && self.preds.len() < PRED_VARS.len() + self.free {
                choices.push((4, 7));
            }
        }
        match self.pick(&choices) {
            1 => Formula::and(self.formula(depth - 1), self.formula(depth - 1)),
            2 => Formula::or(self.formula(depth - 1), self.formula(depth - 1)),
            3 => Formula::not(self.formula(depth - 1)),
            4 => Formula::implies(self.formula(depth - 1), self.formula(depth - 1)),
            5 => Formula::iff(self.formula(depth - 1), self.formula(depth - 1)),
            6 => self.quantify_ind(|g| g.formula(depth - 1)),
            7 => self.quantify_pred(|g| g.formula(depth - 1)),
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Formula {
        if self.inds.is_empty() {
            if self.ind_left == 0 {
                return Formula::Const(self.rng.gen_bool(0.5));
            }
            return self.quantify_ind(|g| g.atom());
        }
        let can_eq = self.p.identity && self.identity_left > 0;
        if self.preds.is_empty() && !(can_eq && self.inds.len() > 1) {
            if can_eq && self.ind_left > 0 {
                return self.quantify_ind(|g| g.atom());
            }
            if self.pred_left > 0 {
                return self.quantify_pred(|g| g.atom());
            }
            if !can_eq {
                return Formula::Const(self.rng.gen_bool(0.5));
            }
        }
        if can_eq && (self.preds.is_empty() || self.inds.len() > 1 && self.rng.gen_range(0..3) == 0) {
            self.identity_left -= 1;
            let n = self.inds.len();
            let a = self.rng.gen_range(0..n);
            let b = if n > 1 { (a + self.rng.gen_range(1..n)) % n } else { a };
            let eq = Formula::eq(self.inds[a], self.inds[b]);
            return if self.rng.gen_bool(0.5) { Formula::not(eq) } else { eq };
        }
        let p = self.preds[self.rng.gen_range(0..self.preds.len())];
        let x = self.inds[self.rng.gen_range(0..self.inds.len())];
        let atom = Formula::app(p, x);
        if self.rng.gen_bool(0.3) {
            Formula::not(atom)
        } else {
            atom
        }
    }

    fn quantify_ind(&mut self, body: impl FnOnce(&mut Self) -> Formula) -> Formula {
        self.ind_left -= 1;
        let v = IND_NAMES[self.inds.len()];
        self.inds.push(v);
        let body = body(self);
        self.inds.pop();
        if self.rng.gen_bool(0.5) {
            Formula::forall(v, body)
        } else {
            Formula::exists(v, body)
        }
    }

    fn quantify_pred(&mut self, body: impl FnOnce(&mut Self) -> Formula) -> Formula {
        self.pred_left -= 1;
        let v = PRED_VARS[self.preds.len() - self.free];
        self.preds.push(v);
        let body = body(self);
        self.preds.pop();
        if self.rng.gen_bool(0.5) {
            Formula::forall_pred(v, body)
        } else {
            Formula::exists_pred(v, body)
        }
    }

    fn pick(&mut self, choices: &[(u32, u8)]) -> u8 {
        let total: u32 = choices.iter().map(|c| c.0).sum();
        let mut r = self.rng.gen_range(0..total);
        for &(w, c) in choices {
            if r < w {
                return c;
            }
            r -= w;
        }
        unreachable!()
    }
}

/// A closed formula within the caps of `p`; the same parameters always
/// give the same formula.
///
/// Free predicates are drawn from `P, Q, R, S`, bound predicate variables
/// from `X, Y, Z, W` and individual variables from `x, y, z, u, v, w`.
pub fn random_formula(p: &GeneratorParams) -> Formula {
    let free = p.max_free_predicates.min(FREE_PREDS.len());
    let mut g = Gen {
        rng: ChaCha8Rng::seed_from_u64(p.seed),
        p,
        pred_left: p.max_pred_quantifiers,
        ind_left: p.max_ind_quantifiers.min(IND_NAMES.len()),
        identity_left: p.count_cap,
        inds: Vec::new(),
        preds: FREE_PREDS[..free].to_vec(),
        free,
    };
    g.formula(p.max_depth)
}

/// A random propositional formula over `letters` letters `p0, p1, ...`.
pub fn random_propositional(seed: u64, letters: usize, depth: usize) -> Formula {
    fn go(rng: &mut ChaCha8Rng, letters: usize, depth: usize) -> Formula {
        if depth == 0 || rng.gen_range(0..5) == 0 {
            if letters == 0 {
                return Formula::Const(rng.gen_bool(0.5));
            }
            return Formula::letter(format!("p{}", rng.gen_range(0..letters)));
        }
        let d = depth - 1;
        match rng.gen_range(0..5) {
            0 => Formula::not(go(rng, letters, d)),
            1 => Formula::and(go(rng, letters, d), go(rng, letters, d)),
            2 => Formula::or(go(rng, letters, d), go(rng, letters, d)),
            3 => Formula::implies(go(rng, letters, d), go(rng, letters, d)),
            _ => Formula::iff(go(rng, letters, d), go(rng, letters, d)),
        }
    }
    go(&mut ChaCha8Rng::seed_from_u64(seed), letters, depth)
}
