use std::cmp::Ordering;
use std::collections::BTreeMap;

use rust_decimal::Decimal;

use super::{Binding, Engine, EvalError, Location, Stream, Traverser};
use crate::ir::{produced, IrStep, PredicateTree, Traversal, WhereRhs};
use crate::model::{Direction, PropertyValue};
use crate::solution::{compare, const_value, order_cmp};
use crate::sparql::SortDir;

fn count_binding(n: u64) -> Binding {
    Binding::Value(PropertyValue::number(Decimal::from(n)))
}

impl Engine<'_> {
    pub(crate) fn step(&self, step: &IrStep, mut stream: Stream) -> Result<Stream, EvalError> {
        let items = std::mem::take(&mut stream.items);
        let out: Vec<Traverser> = match step {
            IrStep::Graph => {
                stream.ordered = false;
                self.graph
                    .vertices()
                    .map(|v| Traverser {
                        fresh: true,
                        ..Traverser::at(Location::Vertex(v.id))
                    })
                    .collect()
            }
            IrStep::MatchStart(_)
            | IrStep::Has { .. }
            | IrStep::HasLabel(_)
            | IrStep::Properties(_)
            | IrStep::Vertex { .. }
            | IrStep::MatchEnd(_) => items.into_iter().flat_map(|t| self.local(step, t)).collect(),
            IrStep::Match(patterns) => {
                let mut out = Vec::new();
                for t in items {
                    let loc = t.loc.clone();
                    let mut done = vec![false; patterns.len()];
                    self.solve(patterns, &mut done, t, &loc, &mut out)?;
                }
                out
            }
            IrStep::Where(p) => {
                let mut out = Vec::new();
                for t in items {
                    if self.holds(p, &t)? {
                        out.push(t);
                    }
                }
                out
            }
            IrStep::And(subs) => {
                let mut out = Vec::new();
                'next: for t in items {
                    for sub in subs {
                        if self.run(sub, Stream::new(vec![t.clone()]))?.items.is_empty() {
                            continue 'next;
                        }
                    }
                    out.push(t);
                }
                out
            }
            IrStep::Union(branches) => {
                let mut out = Vec::new();
                for t in items {
                    for b in branches {
                        let res = self.run(b, Stream::new(vec![t.clone()]))?;
                        out.extend(res.items.into_iter().map(|r| Traverser { loc: t.loc.clone(), ..r }));
                    }
                }
                out
            }
            IrStep::Choose(sub) => {
                let optional_vars = produced(sub);
                let mut out = Vec::new();
                for t in items {
                    let res = self.run(sub, Stream::new(vec![t.clone()]))?;
                    if res.items.is_empty() {
                        let mut t = t;
                        for v in &optional_vars {
                            t.bindings.entry(v.to_string()).or_insert(Binding::Unbound);
                        }
                        out.push(t);
                    } else {
                        out.extend(res.items.into_iter().map(|r| Traverser { loc: t.loc.clone(), ..r }));
                    }
                }
                out
            }
            IrStep::Select(_) => items,
            IrStep::Dedup(keys) => {
                stream.items = items;
                stream.canonicalize();
                let mut index = std::collections::BTreeSet::new();
                let mut out = Vec::new();
                for t in stream.items.drain(..) {
                    let key: Vec<Binding> = keys.iter().map(|k| t.binding(k).clone()).collect();
                    if index.insert(key) {
                        out.push(Traverser { bulk: 1, ..t });
                    }
                }
                out
            }
            IrStep::Range { low, high } => {
                stream.items = items;
                stream.canonicalize();
                let mut out = Vec::new();
                let mut pos = 0u64;
                for t in stream.items.drain(..) {
                    let start = pos.max(*low);
                    let end = (pos + t.bulk).min(high.unwrap_or(u64::MAX));
                    pos += t.bulk;
                    if end > start {
                        out.push(Traverser { bulk: end - start, ..t });
                    }
                }
                out
            }
            IrStep::Order(keys) => {
                stream.items = items;
                stream.canonicalize();
                let mut items = std::mem::take(&mut stream.items);
                items.sort_by(|a, b| self.order(keys, a, b));
                stream.ordered = true;
                items
            }
            IrStep::Group(key) => {
                let mut groups: BTreeMap<Binding, ()> = BTreeMap::new();
                for t in &items {
                    groups.insert(t.binding(key).clone(), ());
                }
                stream.ordered = false;
                groups
                    .into_keys()
                    .map(|k| {
                        let mut t = Traverser::at(Location::None);
                        t.bindings.insert(key.clone(), k);
                        t
                    })
                    .collect()
            }
            IrStep::GroupCount { key, counted, alias } => {
                let mut groups: BTreeMap<Binding, u64> = BTreeMap::new();
                for t in &items {
                    let n = groups.entry(t.binding(key).clone()).or_insert(0);
                    if counted.as_ref().is_none_or(|c| *t.binding(c) != Binding::Unbound) {
                        *n += t.bulk;
                    }
                }
                stream.ordered = false;
                groups
                    .into_iter()
                    .map(|(k, n)| {
                        let mut t = Traverser::at(Location::None);
                        t.bindings.insert(key.clone(), k);
                        t.bindings.insert(alias.clone(), count_binding(n));
                        t
                    })
                    .collect()
            }
            IrStep::Count { counted, alias } => {
                let n: u64 = items
                    .iter()
                    .filter(|t| counted.as_ref().is_none_or(|c| *t.binding(c) != Binding::Unbound))
                    .map(|t| t.bulk)
                    .sum();
                let mut t = Traverser::at(Location::None);
                t.bindings.insert(alias.clone(), count_binding(n));
                stream.ordered = false;
                vec![t]
            }
        };
        stream.items = out;
        Ok(stream)
    }

    fn local(&self, step: &IrStep, mut t: Traverser) -> Vec<Traverser> {
        let g = self.graph;
        match step {
            IrStep::MatchStart(x) => match t.binding(x).clone() {
                Binding::Unbound if t.fresh => {
                    t.fresh = false;
                    t.bindings.insert(x.clone(), t.loc.as_binding());
                    vec![t]
                }
                Binding::Unbound => g
                    .vertices()
                    .map(|v| {
                        let mut n = t.clone();
                        n.bindings.insert(x.clone(), Binding::Vertex(v.id));
                        n.loc = Location::Vertex(v.id);
                        n
                    })
                    .collect(),
                b => {
                    t.fresh = false;
                    t.loc = Location::from_binding(&b);
                    vec![t]
                }
            },
            IrStep::Has { key, value } => {
                let props = match t.loc {
                    Location::Vertex(v) => g.vertex(v).map(|v| &v.props),
                    Location::Edge(e) => g.edge(e).map(|e| &e.props),
                    _ => None,
                };
                if props.and_then(|p| p.get(key)) == Some(value) {
                    vec![t]
                } else {
                    vec![]
                }
            }
            IrStep::HasLabel(label) => {
                let l = match t.loc {
                    Location::Vertex(v) => g.vertex(v).map(|v| v.label.as_str()),
                    Location::Edge(e) => g.edge(e).map(|e| e.label.as_str()),
                    _ => None,
                };
                if l == Some(label.as_str()) {
                    vec![t]
                } else {
                    vec![]
                }
            }
            IrStep::Properties(key) => {
                let value = match t.loc {
                    Location::Vertex(v) => g.vertex(v).and_then(|v| v.props.get(key)),
                    Location::Edge(e) => g.edge(e).and_then(|e| e.props.get(key)),
                    _ => None,
                };
                match value {
                    Some(p) => {
                        t.loc = Location::Value(p.clone());
                        vec![t]
                    }
                    None => vec![],
                }
            }
            IrStep::Vertex { dir, label } => {
                let Location::Vertex(v) = t.loc else {
                    return vec![];
                };
                g.incident(v, *dir)
                    .filter(|e| e.label == *label)
                    .map(|e| {
                        let far = match dir {
                            Direction::Out => e.dst,
                            Direction::In => e.src,
                        };
                        Traverser {
                            loc: Location::Vertex(far),
                            ..t.clone()
                        }
                    })
                    .collect()
            }
            IrStep::MatchEnd(None) => vec![t],
            IrStep::MatchEnd(Some(y)) => {
                let here = t.loc.as_binding();
                match t.binding(y) {
                    Binding::Unbound => {
                        t.bindings.insert(y.clone(), here);
                        vec![t]
                    }
                    b if *b == here => vec![t],
                    _ => vec![],
                }
            }
            other => unreachable!("{other} is not a local step"),
        }
    }

    /// Solves the remaining match patterns for one traverser, preferring a
    /// pattern whose start variable is already bound.
    fn solve(
        &self,
        patterns: &[Traversal],
        done: &mut [bool],
        t: Traverser,
        loc: &Location,
        out: &mut Vec<Traverser>,
    ) -> Result<(), EvalError> {
        let bound_start = |p: &Traversal| match p.first() {
            Some(IrStep::MatchStart(v)) => *t.binding(v) != Binding::Unbound,
            _ => false,
        };
        let next = (0..patterns.len())
            .find(|&i| !done[i] && bound_start(&patterns[i]))
            .or_else(|| {
                (0..patterns.len()).find(|&i| {
                    !done[i] && reversed(&patterns[i]).is_some_and(|r| bound_start(&r))
                })
            })
            .or_else(|| (0..patterns.len()).find(|&i| !done[i]));
        let Some(i) = next else {
            out.push(Traverser {
                loc: loc.clone(),
                fresh: false,
                ..t
            });
            return Ok(());
        };
        done[i] = true;
        // A single hop with only its end bound is walked backwards.
        let flipped = (!bound_start(&patterns[i]))
            .then(|| reversed(&patterns[i]))
            .flatten()
            .filter(|r| bound_start(r));
        let pattern = flipped.as_ref().unwrap_or(&patterns[i]);
        let results = self.run(pattern, Stream::new(vec![t]))?;
        for r in results.items {
            self.solve(patterns, done, r, loc, out)?;
        }
        done[i] = false;
        Ok(())
    }

    fn holds(&self, p: &PredicateTree, t: &Traverser) -> Result<bool, EvalError> {
        match p {
            PredicateTree::Leaf { key, op, rhs } => {
                let lhs = self.value(t.binding(key));
                let rhs = match rhs {
                    WhereRhs::Var(v) => self.value(t.binding(v)),
                    WhereRhs::Const(c) => const_value(c),
                };
                compare(*op, &lhs, &rhs).map_err(|e| EvalError::Type(e.to_string()))
            }
            // Every child is evaluated so a type error anywhere surfaces.
            PredicateTree::And(c) => {
                let r: Result<Vec<bool>, _> = c.iter().map(|x| self.holds(x, t)).collect();
                Ok(r?.into_iter().all(|b| b))
            }
            PredicateTree::Or(c) => {
                let r: Result<Vec<bool>, _> = c.iter().map(|x| self.holds(x, t)).collect();
                Ok(r?.into_iter().any(|b| b))
            }
        }
    }

    fn order(&self, keys: &[(String, SortDir)], a: &Traverser, b: &Traverser) -> Ordering {
        for (k, dir) in keys {
            let o = order_cmp(&self.value(a.binding(k)), &self.value(b.binding(k)));
            let o = match dir {
                SortDir::Asc => o,
                SortDir::Desc => o.reverse(),
            };
            if o != Ordering::Equal {
                return o;
            }
        }
        Ordering::Equal
    }
}

/// `x -label-> y` as `y <-label- x`, for patterns that are exactly one hop.
fn reversed(p: &Traversal) -> Option<Traversal> {
    match p.as_slice() {
        [IrStep::MatchStart(x), IrStep::Vertex { dir, label }, IrStep::MatchEnd(Some(y))] if x != y => Some(vec![
            IrStep::MatchStart(y.clone()),
            IrStep::Vertex {
                dir: dir.reverse(),
                label: label.clone(),
            },
            IrStep::MatchEnd(Some(x.clone())),
        ]),
        _ => None,
    }
}
