use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::game::{Game, GameDescription, StateDesc, TransitionDesc, IDLE};
use crate::numerics::Rational;

use super::{builtin_example, ReductionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoNeGadget {
    /// The terminal-reward game; player 0 gets 0 inside it and -1 at the
    /// exit.
    G1,
    /// The limit-average game; player 0 gets 1 inside it and 0 at the exit,
    /// which becomes a cycle with rewards 0 and 1 when the exit payoffs lie
    /// in `[0, 1]`.
    G2,
}

const GADGET_PREFIX: &str = "nne/";
const S0: &str = "wrap/s0";
const S1: &str = "wrap/s1";
const EXIT: &str = "wrap/exit";

fn pad(desc: &mut GameDescription, k: usize) {
    let extra = k - desc.players;
    desc.players = k;
    for st in &mut desc.states {
        st.actions.extend(std::iter::repeat_with(|| vec![IDLE.to_string()]).take(extra));
        st.rewards.extend(std::iter::repeat_with(Rational::zero).take(extra));
    }
    for tr in &mut desc.transitions {
        tr.profile.extend(std::iter::repeat_with(|| IDLE.to_string()).take(extra));
    }
}

/// Puts `g` behind two fresh states: at `wrap/s0` player 0 either enters
/// the gadget or moves on to `wrap/s1`, where any other player can leave for
/// an exit paying `exit[i - 1]` to player `i` instead of entering `g`.
/// Games with fewer than three players are padded with idle players.
pub fn wrap_with_no_ne_gadget(g: &Game, gadget: NoNeGadget, exit: &[Rational]) -> Result<Game, ReductionError> {
    let s0 = g.initial().ok_or(ReductionError::NoInitial)?;
    let k = g.players().max(3);
    if exit.len() != k - 1 {
        return Err(ReductionError::Invalid(format!(
            "exit payoffs needed for {} players, got {}",
            k - 1,
            exit.len()
        )));
    }
    let mut desc = g.to_description();
    pad(&mut desc, k);
    let inner_initial = g.name(s0).to_string();
    desc.initial = Some(S0.to_string());

    let fresh = |name: &str| -> Result<String, ReductionError> {
        if g.id(name).is_some() {
            return Err(ReductionError::NameClash(name.to_string()));
        }
        Ok(name.to_string())
    };
    let zero = || vec![Rational::zero(); k];
    let str_vec = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let all = |x: &str| vec![x.to_string(); k];

    // gadget states, its two players shifted to players 1 and 2
    let nne = builtin_example(match gadget {
        NoNeGadget::G1 => "G1",
        NoNeGadget::G2 => "G2",
    })?
    .to_description();
    for st in &nne.states {
        let mut actions = vec![vec![IDLE.to_string()]; k];
        actions[1] = st.actions[0].clone();
        actions[2] = st.actions[1].clone();
        let mut rewards = zero();
        rewards[0] = match gadget {
            NoNeGadget::G1 => Rational::zero(),
            NoNeGadget::G2 => Rational::one(),
        };
        rewards[1] = st.rewards[0].clone();
        rewards[2] = st.rewards[1].clone();
        desc.states.push(StateDesc { name: fresh(&format!("{GADGET_PREFIX}{}", st.name))?, actions, rewards });
    }
    for tr in &nne.transitions {
        let mut profile = all(IDLE);
        profile[1] = tr.profile[0].clone();
        profile[2] = tr.profile[1].clone();
        desc.transitions.push(TransitionDesc {
            from: format!("{GADGET_PREFIX}{}", tr.from),
            profile,
            to: format!("{GADGET_PREFIX}{}", tr.to),
        });
    }

    let mut s0_actions = vec![str_vec(&["a"]); k];
    s0_actions[0] = str_vec(&["a", "b"]);
    desc.states.push(StateDesc { name: fresh(S0)?, actions: s0_actions, rewards: zero() });
    desc.transitions.push(TransitionDesc { from: S0.into(), profile: all("a"), to: S1.into() });
    let mut to_gadget = all("a");
    to_gadget[0] = "b".into();
    desc.transitions.push(TransitionDesc {
        from: S0.into(),
        profile: to_gadget,
        to: format!("{GADGET_PREFIX}s1"),
    });

    let mut s1_actions = vec![str_vec(&["a", "b"]); k];
    s1_actions[0] = str_vec(&["a"]);
    desc.states.push(StateDesc { name: fresh(S1)?, actions: s1_actions, rewards: zero() });

    let exits = exit_states(gadget, exit, k);
    let exit_entry = exits[0].0.clone();
    for code in 0..(1usize << (k - 1)) {
        let profile: Vec<String> = (0..k)
            .map(|p| if p > 0 && code >> (k - 1 - p) & 1 == 1 { "b" } else { "a" }.to_string())
            .collect();
        let to = if code == 0 { inner_initial.clone() } else { exit_entry.clone() };
        desc.transitions.push(TransitionDesc { from: S1.into(), profile, to });
    }
    let n = exits.len();
    for (i, (name, rewards)) in exits.iter().enumerate() {
        desc.states.push(StateDesc { name: fresh(name)?, actions: vec![vec![IDLE.to_string()]; k], rewards: rewards.clone() });
        desc.transitions.push(TransitionDesc { from: name.clone(), profile: all(IDLE), to: exits[(i + 1) % n].0.clone() });
    }
    Ok(Game::from_description(&desc)?)
}

/// The exit region as a cycle of named states with their rewards.
fn exit_states(gadget: NoNeGadget, exit: &[Rational], k: usize) -> Vec<(String, Vec<Rational>)> {
    let player0 = match gadget {
        NoNeGadget::G1 => Rational::from_int(-1),
        NoNeGadget::G2 => Rational::zero(),
    };
    let single = || {
        let mut r = vec![player0.clone()];
        r.extend(exit.iter().cloned());
        vec![(EXIT.to_string(), r)]
    };
    let unit = exit.iter().all(|x| !x.is_negative() && *x <= Rational::one());
    if gadget == NoNeGadget::G1 || !unit {
        return single();
    }
    let len = exit.iter().fold(num_bigint::BigInt::from(1), |acc, x| acc.lcm(&x.denom()));
    let Some(len) = len.to_usize() else { return single() };
    if len == 1 && exit.iter().all(|x| x.is_zero() || *x == Rational::one()) {
        return single();
    }
    let counts: Vec<usize> = exit
        .iter()
        .map(|x| (x * Rational::from_bigints(len.into(), 1.into())).numer().to_usize().unwrap())
        .collect();
    (0..len)
        .map(|m| {
            let mut r = vec![Rational::zero(); k];
            for (i, &c) in counts.iter().enumerate() {
                if m < c {
                    r[i + 1] = Rational::one();
                }
            }
            (format!("{EXIT}{m}"), r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::is_terminal_reward;

    #[test]
    fn wrap_fig3() {
        let g = builtin_example("fig3").unwrap();
        let exit = [Rational::new(1, 3), Rational::new(2, 3)];
        let w = wrap_with_no_ne_gadget(&g, NoNeGadget::G2, &exit).unwrap();
        assert_eq!(w.num_states(), 7 + 3 + 2 + 3);
        assert!(w.id("wrap/exit2").is_some());
        let w1 = wrap_with_no_ne_gadget(&g, NoNeGadget::G1, &exit).unwrap();
        assert!(is_terminal_reward(&w1));
        assert_eq!(w1.reward(w1.id("wrap/exit").unwrap(), 0), &Rational::from_int(-1));
    }

    #[test]
    fn pads_small_games() {
        let g = builtin_example("G1").unwrap();
        let w = wrap_with_no_ne_gadget(&g, NoNeGadget::G2, &[Rational::zero(), Rational::zero()]).unwrap();
        assert_eq!(w.players(), 3);
        assert!(wrap_with_no_ne_gadget(&g, NoNeGadget::G2, &[Rational::zero()]).is_err());
    }
}
