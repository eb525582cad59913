use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, VecDeque};

use rlcourse::agents::planning::value_iteration;
use rlcourse::agents::{build_agent, Agent, Experience, LearnerConfig};
use rlcourse::envs::boulder::BoulderConfig;
use rlcourse::envs::roadrunner::{Roadrunner, RoadrunnerConfig};
use rlcourse::envs::supermarket::{ShopState, Supermarket, SupermarketConfig};
use rlcourse::envs::{self};
use rlcourse::{Dynamics, Element, Environment, RngStream};
use serde_json::json;

/// Deterministic transition graph found by breadth-first search over clones.
struct Graph {
    start: u64,
    edges: BTreeMap<u64, Vec<(u64, f64, bool)>>,
}

fn explore<D: Dynamics + Clone>(mut dynamics: D) -> Graph {
    let mut rng = RngStream::new(0);
    let space = dynamics.observation_space();
    let n = dynamics.action_space().cardinality().unwrap() as usize;
    let start = space.key_of(&dynamics.reset(&mut rng)).unwrap().0;
    let mut seen = BTreeMap::new();
    seen.insert(start, dynamics);
    let mut queue = VecDeque::from([start]);
    let mut edges = BTreeMap::new();
    while let Some(s) = queue.pop_front() {
        let mut out = Vec::new();
        for a in 0..n {
            let mut d = seen[&s].clone();
            let t = d.transition(&Element::Discrete(a), &mut rng);
            let k = space.key_of(&t.observation).unwrap().0;
            out.push((k, t.reward, t.terminated));
            if !t.terminated && !seen.contains_key(&k) {
                seen.insert(k, d);
                queue.push_back(k);
            }
        }
        edges.insert(s, out);
    }
    Graph { start, edges }
}

/// Undiscounted optimal value of the start state.
fn optimal_value(g: &Graph) -> f64 {
    let mut v: BTreeMap<u64, f64> = g.edges.keys().map(|&k| (k, 0.0)).collect();
    for _ in 0..100_000 {
        let mut change: f64 = 0.0;
        let next: BTreeMap<u64, f64> = g
            .edges
            .iter()
            .map(|(&s, out)| {
                let best = out
                    .iter()
                    .map(|&(k, r, t)| r + if t { 0.0 } else { v[&k] })
                    .fold(f64::NEG_INFINITY, f64::max);
                change = change.max((best - v[&s]).abs());
                (s, best)
            })
            .collect();
        v = next;
        if change < 1e-10 {
            return v[&g.start];
        }
    }
    panic!("no convergence");
}

fn train(agent: &mut dyn Agent, env: &mut dyn Environment, steps: usize) {
    let mut obs = env.reset(None);
    agent.begin_episode(&obs).unwrap();
    for _ in 0..steps {
        let a = agent.act(&obs).unwrap();
        let out = env.step(&a).unwrap();
        agent
            .observe(&Experience {
                observation: &obs,
                action: &a,
                reward: out.reward,
                next_observation: &out.observation,
                terminated: out.terminated,
                truncated: out.truncated,
            })
            .unwrap();
        obs = if out.done() { env.reset(None) } else { out.observation };
        if out.terminated || out.truncated {
            agent.begin_episode(&obs).unwrap();
        }
    }
}

fn greedy_rollout(agent: &mut dyn Agent, env: &mut dyn Environment) -> (f64, Vec<String>) {
    let mut obs = env.reset(None);
    let (mut ret, mut flags) = (0.0, Vec::new());
    loop {
        let a = agent.greedy_action(&obs).unwrap();
        let out = env.step(&a).unwrap();
        ret += out.reward;
        flags.extend(out.info.keys().cloned());
        if out.done() {
            return (ret, flags);
        }
        obs = out.observation;
    }
}

fn decaying_q() -> LearnerConfig {
    LearnerConfig { epsilon: 0.2, alpha_decay: true, ..Default::default() }
}

fn check_against_oracle(name: &str, params: serde_json::Value, q0: f64, optimum: f64) {
    let mut env = envs::build(name, &params, 1).unwrap();
    let cfg = LearnerConfig { q0, ..decaying_q() };
    let mut agent = build_agent("q_learning", &cfg, env.observation_space(), env.action_space(), 2).unwrap();
    train(agent.as_mut(), env.as_mut(), 100_000);
    let (ret, _) = greedy_rollout(agent.as_mut(), env.as_mut());
    assert!((ret - optimum).abs() <= 0.05 * optimum.abs(), "{name}: greedy {ret} vs optimum {optimum}");
}

#[test]
fn q_learning_reaches_the_boulder_optimum() {
    let cfg = BoulderConfig { height: 5, num_grips: 2, max_steps: None };
    let env = envs::boulder::make(cfg.clone(), 1).unwrap();
    let optimum = optimal_value(&explore(env.dynamics().clone()));
    assert_eq!(optimum, 1.0);
    check_against_oracle("boulder", json!({"height": 5, "num_grips": 2}), 0.0, optimum);
}

#[test]
fn q_learning_reaches_the_roadrunner_optimum_and_target() {
    let cfg = RoadrunnerConfig { width: 12, ..Default::default() };
    let optimum = optimal_value(&explore(Roadrunner::new(cfg).unwrap()));
    check_against_oracle("roadrunner", json!({"width": 12}), 0.0, optimum);

    let mut env = envs::build("roadrunner", &json!({"width": 12}), 1).unwrap();
    let mut agent = build_agent("q_learning", &decaying_q(), env.observation_space(), env.action_space(), 5).unwrap();
    train(agent.as_mut(), env.as_mut(), 100_000);
    let (_, flags) = greedy_rollout(agent.as_mut(), env.as_mut());
    assert!(flags.iter().any(|f| f == "reached_target"), "{flags:?}");
}

/// Best achievable return by breadth-first search over (cell, items) states.
fn supermarket_bfs(shop: &Supermarket) -> f64 {
    let start = ShopState { cell: shop.plan().start, collected: 0 };
    let mut dist = BTreeMap::from([(start.id(), 0usize)]);
    let mut queue = VecDeque::from([start]);
    let mut best = f64::NEG_INFINITY;
    while let Some(s) = queue.pop_front() {
        let d = dist[&s.id()];
        for a in 0..4 {
            let (n, _, done) = shop.next(s, a);
            if done {
                let ret = 50.0 + 25.0 * n.collected.count_ones() as f64 - (d + 1) as f64;
                best = best.max(ret);
            } else if let Entry::Vacant(e) = dist.entry(n.id()) {
                e.insert(d + 1);
                queue.push_back(n);
            }
        }
    }
    best
}

#[test]
fn value_iteration_policy_matches_graph_search() {
    let shop = Supermarket::new(SupermarketConfig::default()).unwrap();
    let optimum = supermarket_bfs(&shop);
    let vi = value_iteration(&shop, 1.0, 1e-9, 10_000, &mut RngStream::new(0)).unwrap();
    assert_eq!(vi.values[ShopState { cell: shop.plan().start, collected: 0 }.id()], optimum);
    let mut env = envs::build("supermarket", &serde_json::Value::Null, 0).unwrap();
    let mut obs = env.reset(None);
    let mut ret = 0.0;
    loop {
        let s = obs.as_discrete().unwrap() as u64;
        let out = env.step(&Element::Discrete(vi.q.greedy_first(s))).unwrap();
        ret += out.reward;
        if out.done() {
            break;
        }
        obs = out.observation;
    }
    assert_eq!(ret, optimum);
}

#[test]
fn q_learning_reaches_the_supermarket_optimum() {
    let shop = Supermarket::new(SupermarketConfig::default()).unwrap();
    // Pessimistic zeros settle on a two-item route; optimistic values find all three.
    check_against_oracle("supermarket", serde_json::Value::Null, 50.0, supermarket_bfs(&shop));
}
