use super::binary::BinaryDecomposition;
use super::ChainParameters;
use crate::codes::{format_bits, Code};
use crate::error::{Error, Result};

/// One partition step: the representative code C_j and the translations of
/// C_{j+1} that tile it. At the last level C_{j+1} = {0}, so the leaders are
/// the words of C_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLevel {
    pub code: Code,
    pub leaders: Vec<u32>,
    pub declared_distance: u32,
}

impl ChainLevel {
    /// Input bits consumed by this level.
    pub fn bits(&self) -> usize {
        self.leaders.len().trailing_zeros() as usize
    }
}

/// A nested chain {0,1}^ℓ = C_1 ⊃ C_2 ⊃ … ⊃ C_m ⊃ {0} where each C_j is the
/// disjoint union of translates v + C_{j+1}, v running over the level's
/// leaders. Every sub-code at level j is then a translate of C_j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDecomposition {
    length: usize,
    levels: Vec<ChainLevel>,
}

impl ChainDecomposition {
    /// Builds the chain from leader lists alone, top level first. The codes
    /// are rebuilt bottom-up as unions of translates, the top one must be the
    /// whole space, and each declared distance must not exceed the actual
    /// minimum distance of its code.
    pub fn from_leaders(length: usize, levels: Vec<(Vec<u32>, u32)>) -> Result<ChainDecomposition> {
        if length == 0 || length > 16 {
            return Err(Error::LengthOutOfRange(length));
        }
        if levels.is_empty() {
            return Err(Error::InvalidDecomposition("no levels".into()));
        }
        let mut built: Vec<ChainLevel> = Vec::with_capacity(levels.len());
        let mut below = Code::from_words(length, [0])?;
        for (idx, (leaders, declared)) in levels.into_iter().enumerate().rev() {
            let level = idx + 1;
            if !leaders.len().is_power_of_two() {
                return Err(Error::NonPowerOfTwo {
                    level,
                    count: leaders.len(),
                });
            }
            let code = below.union_of_translates(&leaders).map_err(|e| match e {
                Error::DuplicateWord(w) => Error::InvalidDecomposition(format!(
                    "translates at level {level} overlap (word {w})"
                )),
                other => other,
            })?;
            check_distance(level, &code, declared)?;
            below = code.clone();
            built.push(ChainLevel {
                code,
                leaders,
                declared_distance: declared,
            });
        }
        built.reverse();
        if built[0].code.size() != 1usize << length {
            return Err(Error::InvalidDecomposition(format!(
                "top level covers {} of {} words",
                built[0].code.size(),
                1usize << length
            )));
        }
        Ok(ChainDecomposition { length, levels: built })
    }

    /// Builds the chain from nested codes C_1 ⊃ … ⊃ C_m (C_1 the whole
    /// space), choosing minimum-weight leaders greedily. Each code must be a
    /// union of translates of the next one.
    pub fn from_codes(codes: Vec<Code>, declared: Vec<u32>) -> Result<ChainDecomposition> {
        if codes.is_empty() || codes.len() != declared.len() {
            return Err(Error::InvalidDecomposition(
                "need one declared distance per code".into(),
            ));
        }
        let length = codes[0].length();
        let mut levels = Vec::with_capacity(codes.len());
        for (j, code) in codes.iter().enumerate() {
            let sub = match codes.get(j + 1) {
                Some(next) => next.clone(),
                None => Code::from_words(length, [0])?,
            };
            levels.push((translation_leaders(code, &sub, j + 1)?, declared[j]));
        }
        let chain = ChainDecomposition::from_leaders(length, levels)?;
        for (level, code) in chain.levels.iter().zip(&codes) {
            debug_assert_eq!(&level.code, code);
        }
        Ok(chain)
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn levels(&self) -> &[ChainLevel] {
        &self.levels
    }

    /// (k_j, d_j) using the declared distances.
    pub fn parameters(&self) -> ChainParameters {
        let levels = self
            .levels
            .iter()
            .map(|l| (l.code.size().trailing_zeros() as usize, l.declared_distance))
            .collect();
        ChainParameters::new(self.length, levels).expect("validated chain")
    }

    /// Splits every level into single-bit steps. The bits of a level pick a
    /// leader by big-endian index (the level's first bit is the most
    /// significant). Children are found by filtering the parent set through
    /// membership in the next representative code.
    pub fn binary_refinement(&self) -> Result<BinaryDecomposition> {
        let l = self.length;
        let mut members = Vec::with_capacity(self.levels.len());
        for j in 0..self.levels.len() {
            members.push(match self.levels.get(j + 1) {
                Some(next) => next.code.membership(),
                None => Code::from_words(l, [0])?.membership(),
            });
        }
        let mut leaves = Vec::with_capacity(1 << l);
        let all: Vec<u32> = (0..(1u32 << l)).collect();
        self.refine(0, 0, all, &members, &mut leaves)?;
        BinaryDecomposition::from_leaves(l, leaves)
    }

    fn refine(
        &self,
        level: usize,
        offset: u32,
        set: Vec<u32>,
        members: &[crate::codes::WordSet],
        leaves: &mut Vec<u32>,
    ) -> Result<()> {
        if level == self.levels.len() {
            if set.len() != 1 {
                return Err(Error::InvalidDecomposition(format!(
                    "leaf holds {} words",
                    set.len()
                )));
            }
            leaves.push(set[0]);
            return Ok(());
        }
        let lv = &self.levels[level];
        let expected = set.len() / lv.leaders.len();
        for &v in &lv.leaders {
            let shift = offset ^ v;
            let child: Vec<u32> = set
                .iter()
                .copied()
                .filter(|&x| members[level].contains(x ^ shift))
                .collect();
            if child.len() != expected {
                return Err(Error::InvalidDecomposition(format!(
                    "level {} child of size {} (expected {expected})",
                    level + 1,
                    child.len()
                )));
            }
            self.refine(level + 1, shift, child, members, leaves)?;
        }
        Ok(())
    }
}

fn check_distance(level: usize, code: &Code, declared: u32) -> Result<()> {
    // A one-word code constrains nothing.
    if let Ok(actual) = code.min_distance() {
        if declared > actual {
            return Err(Error::DistanceMismatch {
                level,
                declared,
                actual,
            });
        }
    }
    Ok(())
}

fn by_weight(words: &[u32]) -> Vec<u32> {
    let mut w = words.to_vec();
    w.sort_by_key(|&x| (x.count_ones(), x));
    w
}

/// Translations v with parent = ⊔ (v + sub), each the minimum-weight vector
/// producing its translate, listed in order of discovery (lightest first).
fn translation_leaders(parent: &Code, sub: &Code, level: usize) -> Result<Vec<u32>> {
    if sub.length() != parent.length() || !parent.size().is_multiple_of(sub.size()) {
        return Err(Error::InvalidDecomposition(format!(
            "level {level}: sub-code does not divide its parent"
        )));
    }
    let count = parent.size() / sub.size();
    if !count.is_power_of_two() {
        return Err(Error::NonPowerOfTwo { level, count });
    }
    let parent_set = parent.membership();
    let mut covered = crate::codes::WordSet::empty(parent.length());
    let order = by_weight(parent.words());
    let mut leaders = Vec::with_capacity(count);
    let found = if sub.is_linear() {
        for &x in &order {
            if covered.contains(x) {
                continue;
            }
            if sub.words().iter().any(|&s| !parent_set.contains(x ^ s)) {
                break;
            }
            for &s in sub.words() {
                covered.insert(x ^ s);
            }
            leaders.push(x);
        }
        leaders.len() == count
    } else {
        let candidates = by_weight(sub.words());
        exact_cover(&order, 0, &candidates, sub, &parent_set, &mut covered, &mut leaders, count)
    };
    if !found {
        return Err(Error::InvalidDecomposition(format!(
            "level {level}: parent is not a union of translates of the sub-code ({})",
            format_bits(sub.words()[0], sub.length())
        )));
    }
    Ok(leaders)
}

/// Depth-first tiling for nonlinear sub-codes: the lightest uncovered word x
/// must lie in some translate x ⊕ s ⊕ sub; candidates are tried lightest
/// translation first.
#[allow(clippy::too_many_arguments)]
fn exact_cover(
    order: &[u32],
    mut cursor: usize,
    sub_by_weight: &[u32],
    sub: &Code,
    parent: &crate::codes::WordSet,
    covered: &mut crate::codes::WordSet,
    leaders: &mut Vec<u32>,
    count: usize,
) -> bool {
    while cursor < order.len() && covered.contains(order[cursor]) {
        cursor += 1;
    }
    if cursor == order.len() {
        return leaders.len() == count;
    }
    let x = order[cursor];
    let mut shifts: Vec<u32> = sub_by_weight.iter().map(|&s| x ^ s).collect();
    shifts.sort_by_key(|&v| (v.count_ones(), v));
    let mut tried: Vec<Vec<u32>> = Vec::new();
    for v in shifts {
        let fits = sub
            .words()
            .iter()
            .all(|&s| parent.contains(v ^ s) && !covered.contains(v ^ s));
        if !fits {
            continue;
        }
        let mut image: Vec<u32> = sub.words().iter().map(|&s| v ^ s).collect();
        image.sort_unstable();
        if tried.contains(&image) {
            continue;
        }
        for &w in &image {
            covered.insert(w);
        }
        leaders.push(v);
        if exact_cover(order, cursor + 1, sub_by_weight, sub, parent, covered, leaders, count) {
            return true;
        }
        leaders.pop();
        for &w in &image {
            covered.remove(w);
        }
        tried.push(image);
    }
    false
}
