mod common;

use std::sync::Arc;

use common::{gen, oracle_job, oracle_machine, View};
use fjsp::dispatch::{resolve, select_job, select_machine};
use fjsp::gantt::Gantt;
use fjsp::generate::GenConfig;
use fjsp::{fixed_action_rollout, parse_instance, validate, Action, FjspEnv, JobRule, MachineRule, RawInstance, SimState, StateSnapshot};
use proptest::prelude::*;

fn small() -> GenConfig {
    GenConfig { jobs: 4, machines: 3, ops_per_job: (1, 4), alternatives: (1, 3), duration: (1, 9) }
}

fn instances() -> impl Strategy<Value = Arc<RawInstance>> {
    prop_oneof![
        any::<u64>().prop_map(|s| gen(&GenConfig::tiny(), s)),
        any::<u64>().prop_map(|s| gen(&small(), s)),
        any::<u64>().prop_map(|s| gen(&GenConfig::mk01_like(), s)),
    ]
}

fn actions() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..12, 1..80)
}

/// Step with `codes[i % len]`, returning rewards, states and the env.
fn play(inst: &Arc<RawInstance>, codes: &[usize]) -> (Vec<i64>, Vec<Vec<f64>>, FjspEnv) {
    let mut env = FjspEnv::new(inst.clone());
    let mut states = vec![env.reset().0];
    let mut rewards = Vec::new();
    let mut i = 0;
    while !env.is_done() {
        let step = env.step(Action::new(codes[i % codes.len()]).unwrap()).unwrap();
        rewards.push(step.reward);
        states.push(step.state.0);
        i += 1;
    }
    (rewards, states, env)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reward_sum_is_minus_machines_times_makespan(inst in instances(), codes in actions()) {
        let (rewards, _, env) = play(&inst, &codes);
        let s = env.schedule().unwrap();
        prop_assert_eq!(rewards.iter().sum::<i64>(), -((inst.num_machines as u64 * s.makespan) as i64));
        prop_assert_eq!(rewards.len(), inst.total_ops());
    }

    #[test]
    fn every_schedule_validates(inst in instances(), codes in actions()) {
        let (_, _, env) = play(&inst, &codes);
        let v = validate(&inst, &env.schedule().unwrap());
        prop_assert!(v.is_valid(), "{}", v);
    }

    #[test]
    fn states_are_bounded_and_fixed_length(inst in instances(), codes in actions()) {
        let (_, states, _) = play(&inst, &codes);
        let n = inst.num_jobs;
        for s in &states {
            prop_assert_eq!(s.len(), 2 * n);
            prop_assert!(s.iter().all(|&x| (0.0..=1.0).contains(&x)));
        }
        let last = states.last().unwrap();
        let max_ops = inst.max_ops() as f64;
        for j in 0..n {
            prop_assert_eq!(last[n + j], inst.op_count(j) as f64 / max_ops);
        }
    }

    #[test]
    fn encodings_differ_across_progress(inst in instances(), codes in actions()) {
        // decision states at different completed totals never coincide
        let (_, states, _) = play(&inst, &codes);
        let n = inst.num_jobs;
        let total = |s: &Vec<f64>| -> f64 { s[n..].iter().sum() };
        for a in 0..states.len() {
            for b in a + 1..states.len() {
                if total(&states[a]) != total(&states[b]) {
                    prop_assert_ne!(&states[a], &states[b]);
                }
            }
        }
    }

    #[test]
    fn busy_plus_vacancy_fills_the_area(inst in instances(), codes in actions()) {
        let (_, _, env) = play(&inst, &codes);
        let s = env.schedule().unwrap();
        let g = Gantt::from_schedule(&s, Some(inst.num_machines));
        prop_assert_eq!(g.busy_total + g.vacancy_total, inst.num_machines as u64 * s.makespan);
        prop_assert_eq!(env.sim().vacancy_total(), g.vacancy_total);
        let busy: u64 = s.entries.iter().map(|e| e.end - e.start).sum();
        prop_assert_eq!(busy, g.busy_total);
    }

    #[test]
    fn parse_round_trip(inst in instances()) {
        let back = parse_instance(&inst.to_text()).unwrap();
        prop_assert_eq!(&back, &*inst);
    }

    #[test]
    fn stepping_is_deterministic(inst in instances(), codes in actions()) {
        let (r1, s1, e1) = play(&inst, &codes);
        let (r2, s2, e2) = play(&inst, &codes);
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(s1, s2);
        prop_assert_eq!(e1.schedule().unwrap(), e2.schedule().unwrap());
    }

    #[test]
    fn snapshot_restore_replays_identically(inst in instances(), codes in actions(), cut in 0usize..60) {
        let (rewards, _, env) = play(&inst, &codes);
        let cut = cut % inst.total_ops();
        let mut a = FjspEnv::new(inst.clone());
        for i in 0..cut {
            a.step(Action::new(codes[i % codes.len()]).unwrap()).unwrap();
        }
        let text = a.sim().snapshot().to_text();
        let restored = SimState::restore(&StateSnapshot::from_text(&text).unwrap()).unwrap();
        let mut b = FjspEnv::from_state(restored);
        prop_assert_eq!(b.observe(), a.observe());
        let mut tail = Vec::new();
        for i in cut..inst.total_ops() {
            tail.push(b.step(Action::new(codes[i % codes.len()]).unwrap()).unwrap().reward);
        }
        prop_assert_eq!(&tail[..], &rewards[cut..]);
        prop_assert_eq!(b.schedule().unwrap(), env.schedule().unwrap());
    }

    #[test]
    fn rules_agree_with_brute_force(inst in instances(), codes in actions()) {
        let mut env = FjspEnv::new(inst.clone());
        let mut i = 0;
        while !env.is_done() {
            let sim = env.sim();
            let view = View::from_entries(&inst, sim.entries(), sim.clock());
            let oracle_assignable: Vec<usize> = view.candidates(&inst).into_iter().map(|(j, _)| j).collect();
            prop_assert_eq!(sim.assignable_jobs().collect::<Vec<_>>(), oracle_assignable);
            for rule in JobRule::ALL {
                let job = select_job(rule, sim).unwrap();
                prop_assert_eq!(Some(job), oracle_job(&inst, &view, rule), "{:?}", rule);
                for mr in MachineRule::ALL {
                    let m = select_machine(mr, sim, job).unwrap();
                    prop_assert_eq!(Some(m), oracle_machine(&inst, &view, mr, job));
                }
            }
            env.step(Action::new(codes[i % codes.len()]).unwrap()).unwrap();
            i += 1;
        }
    }

    #[test]
    fn scaling_durations_scales_every_rollout(inst in instances(), c in 2u64..7) {
        let mut scaled = (*inst).clone();
        for op in scaled.jobs.iter_mut().flat_map(|j| j.operations.iter_mut()) {
            for a in &mut op.alternatives {
                a.duration *= c;
            }
        }
        let scaled = Arc::new(scaled);
        for a in Action::all() {
            let x = fixed_action_rollout(&inst, a).unwrap();
            let y = fixed_action_rollout(&scaled, a).unwrap();
            prop_assert_eq!(y.makespan(), c * x.makespan());
            let key = |s: &fjsp::Schedule| s.entries.iter().map(|e| (e.job, e.stage, e.machine)).collect::<Vec<_>>();
            prop_assert_eq!(key(&x.schedule), key(&y.schedule));
        }
    }

    #[test]
    fn resolved_decisions_are_feasible(inst in instances(), codes in actions()) {
        let mut env = FjspEnv::new(inst.clone());
        let mut i = 0;
        while !env.is_done() {
            for a in Action::all() {
                let (job, m) = resolve(a, env.sim()).unwrap();
                prop_assert!(env.sim().is_assignable(job));
                prop_assert!(env.sim().idle_candidates(job).iter().any(|&(x, _)| x == m));
            }
            env.step(Action::new(codes[i % codes.len()]).unwrap()).unwrap();
            i += 1;
        }
    }
}
