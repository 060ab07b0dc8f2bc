use super::{At, BoolExpr, BraspProgram, Builder, Mask, Tiebreak, Vector, VectorDef};
use crate::error::{Error, Result};

/// Replaces every leftmost future-masked op by two rightmost ops:
///
/// ```text
/// X_seen(t) = rmost[t' < t, s(t')] s(t') : 0
/// X(t)      = rmost[t' < t, s(t') & !X_seen(t')] v(t') : d(t)
/// ```
///
/// `X_seen` marks positions preceded by a score-1 position, so the second op
/// has at most one maximizer: the leftmost score-1 position.
pub fn rewrite_leftmost_to_rightmost(p: &BraspProgram) -> Result<BraspProgram> {
    let mut b = Builder::new(p.alphabet());
    b.reserve(p.vectors().iter().map(|v| v.name.clone()));
    // old index -> new index
    let mut remap: Vec<usize> = (0..p.alphabet().len()).collect();
    for v in &p.vectors()[p.alphabet().len()..] {
        let re = |e: &BoolExpr| e.map_vars(&|i, at| BoolExpr::var(remap[i], at));
        let new_index = match &v.def {
            VectorDef::Atomic(_) => unreachable!("atomic vectors precede all others"),
            VectorDef::PositionWise(e) => b.push_exact(&v.name, VectorDef::PositionWise(re(e))),
            VectorDef::Attention { tiebreak: Tiebreak::Left, mask, score, value, default } => {
                if *mask != Mask::Future {
                    return Err(Error::Unsupported(format!(
                        "`{}` is a leftmost past-masked op; only future-masked ops are rewritten",
                        v.name
                    )));
                }
                if score.uses(At::Query) {
                    return Err(Error::Unsupported(format!(
                        "`{}` has a binary score",
                        v.name
                    )));
                }
                let s = re(score);
                let seen = b.push(
                    &format!("{}_seen", v.name),
                    VectorDef::Attention {
                        tiebreak: Tiebreak::Right,
                        mask: Mask::Future,
                        score: s.clone(),
                        value: s.clone(),
                        default: BoolExpr::Const(false),
                    },
                );
                b.push_exact(
                    &v.name,
                    VectorDef::Attention {
                        tiebreak: Tiebreak::Right,
                        mask: Mask::Future,
                        score: BoolExpr::and(s, BoolExpr::not(BoolExpr::var(seen, At::Key))),
                        value: re(value),
                        default: re(default),
                    },
                )
            }
            VectorDef::Attention { tiebreak, mask, score, value, default } => b.push_exact(
                &v.name,
                VectorDef::Attention {
                    tiebreak: *tiebreak,
                    mask: *mask,
                    score: re(score),
                    value: re(value),
                    default: re(default),
                },
            ),
        };
        remap.push(new_index);
    }
    let out = remap[p.output()];
    let prog = b.finish(out, p.readout())?;
    debug_assert!(prog.vectors().iter().all(|Vector { def, .. }| !matches!(
        def,
        VectorDef::Attention { tiebreak: Tiebreak::Left, .. }
    )));
    Ok(prog)
}
