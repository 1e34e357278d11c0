//! Reusable protocols: BFS leader election, pipelined convergecast to the
//! root and pipelined broadcast from the root.

use std::collections::VecDeque;

use super::{Message, Model, ModelKind, Network, NodeInfo, NodeProgram, RoundStats, SimError, StepContext};
use crate::error::{Error, Result};
use crate::graph::Graph;

const ITEM: u64 = 0;
const DONE: u64 = 1;
const LAST_ITEM: u64 = 2;

/// Spanning tree rooted at the minimum id, with BFS depths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfsTree {
    pub leader: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
    pub children: Vec<Vec<usize>>,
}

impl BfsTree {
    pub fn height(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// Depth-one tree with every node a child of `root`; the shape used for
    /// direct sends in the congested clique.
    pub fn direct(n: usize, root: usize) -> Self {
        Self {
            leader: root,
            parent: (0..n).map(|v| (v != root).then_some(root)).collect(),
            depth: (0..n).map(|v| usize::from(v != root)).collect(),
            children: (0..n).map(|v| if v == root { (0..n).filter(|&u| u != root).collect() } else { Vec::new() }).collect(),
        }
    }
}

/// Flooding: every node adopts the smallest `(root, distance)` it hears and
/// tells its neighbors, flagging the one it picked as parent.
struct LeaderFlood {
    best: (usize, usize),
    parent: Option<usize>,
    children: Vec<usize>,
    dirty: bool,
}

impl NodeProgram for LeaderFlood {
    type Output = LeaderFlood;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        for (from, msg) in ctx.inbox() {
            let (root, dist, is_child) = (msg.word(0) as usize, msg.word(1) as usize, msg.word(2) == 1);
            match (is_child, self.children.binary_search(from)) {
                (true, Err(pos)) => self.children.insert(pos, *from),
                (false, Ok(pos)) => {
                    self.children.remove(pos);
                }
                _ => {}
            }
            if (root, dist + 1) < self.best {
                self.best = (root, dist + 1);
                self.parent = Some(*from);
                self.dirty = true;
            }
        }
        if self.dirty {
            let (root, dist) = self.best;
            for i in 0..ctx.neighbors().len() {
                let v = ctx.neighbors()[i];
                let flag = u64::from(self.parent == Some(v));
                ctx.send(v, Message::from_words(&[root as u64, dist as u64, flag]));
            }
            self.dirty = false;
        }
    }

    fn is_halted(&self) -> bool {
        !self.dirty
    }

    fn into_output(self) -> Self {
        self
    }
}

/// Elects the minimum id as leader and builds a BFS tree on a fresh CONGEST
/// network, reporting the rounds used.
pub fn elect_leader_bfs(g: &Graph) -> Result<(BfsTree, RoundStats)> {
    let mut net = Network::new(g, Model::congest(), 0);
    let tree = build_bfs_tree(&mut net)?;
    Ok((tree, net.stats()))
}

/// Leader election and BFS tree construction on an existing network.
pub fn build_bfs_tree(net: &mut Network<'_>) -> Result<BfsTree> {
    let g = net.graph();
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let out = net.run(|info: NodeInfo<'_>| LeaderFlood {
        best: (info.id, 0),
        parent: None,
        children: Vec::new(),
        dirty: true,
    })?;
    let leader = out.iter().map(|p| p.best.0).min().unwrap_or(0);
    Ok(BfsTree {
        leader,
        parent: out.iter().map(|p| p.parent).collect(),
        depth: out.iter().map(|p| p.best.1).collect(),
        children: out.into_iter().map(|p| p.children).collect(),
    })
}

struct Upcast {
    parent: Option<usize>,
    pending_children: usize,
    queue: VecDeque<Message>,
    gathered: Vec<Message>,
    finished: bool,
}

impl NodeProgram for Upcast {
    type Output = Vec<Message>;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        for (_, msg) in ctx.inbox() {
            let tag = msg.word(0);
            if tag != DONE {
                self.queue.push_back(msg.words()[1..].iter().copied().collect());
            }
            if tag != ITEM {
                self.pending_children -= 1;
            }
        }
        let Some(parent) = self.parent else {
            self.gathered.extend(self.queue.drain(..));
            self.finished = self.pending_children == 0;
            return;
        };
        if self.finished {
            return;
        }
        if let Some(item) = self.queue.pop_front() {
            let last = self.queue.is_empty() && self.pending_children == 0;
            let mut msg = Message::from_words(&[if last { LAST_ITEM } else { ITEM }]);
            msg.extend(item.words().iter().copied());
            ctx.send(parent, msg);
            self.finished = last;
        } else if self.pending_children == 0 {
            ctx.send(parent, Message::from_words(&[DONE]));
            self.finished = true;
        }
    }

    fn is_halted(&self) -> bool {
        self.finished
    }

    fn into_output(self) -> Vec<Message> {
        self.gathered
    }
}

/// Sends every item straight to the root, one per round.
struct DirectUpcast {
    root: usize,
    queue: VecDeque<Message>,
    gathered: Vec<Message>,
}

impl NodeProgram for DirectUpcast {
    type Output = Vec<Message>;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        for (_, msg) in ctx.inbox() {
            self.gathered.push(msg.clone());
        }
        if ctx.id() != self.root {
            if let Some(item) = self.queue.pop_front() {
                ctx.send(self.root, item);
            }
        }
    }

    fn is_halted(&self) -> bool {
        self.queue.is_empty()
    }

    fn into_output(self) -> Vec<Message> {
        self.gathered
    }
}

fn check_items(items: &[Vec<Message>], limit: usize) -> Result<()> {
    for (node, list) in items.iter().enumerate() {
        if let Some(item) = list.iter().find(|m| m.len() > limit) {
            return Err(SimError::ItemTooLarge { node, words: item.len(), limit }.into());
        }
    }
    Ok(())
}

/// Gathers all items at the tree root. In CONGEST items travel up the tree
/// with pipelining; in the clique every node sends directly to the root.
/// The root's own items come first, then arrivals in delivery order.
pub fn convergecast(net: &mut Network<'_>, tree: &BfsTree, mut items: Vec<Vec<Message>>) -> Result<Vec<Message>> {
    let root = tree.leader;
    let mut gathered = std::mem::take(&mut items[root]);
    let out = match net.model().kind {
        ModelKind::Congest => {
            check_items(&items, net.model().bandwidth_words.saturating_sub(1))?;
            net.run(|info: NodeInfo<'_>| Upcast {
                parent: tree.parent[info.id],
                pending_children: tree.children[info.id].len(),
                queue: std::mem::take(&mut items[info.id]).into(),
                gathered: Vec::new(),
                finished: false,
            })?
        }
        ModelKind::Clique => {
            check_items(&items, net.model().bandwidth_words)?;
            net.run(|info: NodeInfo<'_>| DirectUpcast {
                root,
                queue: std::mem::take(&mut items[info.id]).into(),
                gathered: Vec::new(),
            })?
        }
    };
    gathered.extend(out.into_iter().flatten());
    Ok(gathered)
}

/// Standalone convergecast on a fresh network.
pub fn pipelined_convergecast(
    g: &Graph,
    tree: &BfsTree,
    items: Vec<Vec<Message>>,
    model: Model,
) -> Result<(Vec<Message>, RoundStats)> {
    let mut net = Network::new(g, model, 0);
    let gathered = convergecast(&mut net, tree, items)?;
    Ok((gathered, net.stats()))
}

struct Downcast {
    targets: Vec<usize>,
    queue: VecDeque<Message>,
    received: Vec<Message>,
}

impl NodeProgram for Downcast {
    type Output = Vec<Message>;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        for (_, msg) in ctx.inbox() {
            if msg.word(0) != DONE {
                self.received.push(msg.words()[1..].iter().copied().collect());
            }
            self.queue.push_back(msg.clone());
        }
        if let Some(msg) = self.queue.pop_front() {
            for &child in &self.targets {
                ctx.send(child, msg.clone());
            }
        }
    }

    fn is_halted(&self) -> bool {
        self.queue.is_empty()
    }

    fn into_output(self) -> Vec<Message> {
        self.received
    }
}

/// Delivers the root's items to every node, pipelined down the tree in
/// CONGEST and sent directly in the clique. Returns what each node holds.
pub fn downcast(net: &mut Network<'_>, tree: &BfsTree, items: Vec<Message>) -> Result<Vec<Vec<Message>>> {
    let limit = net.model().bandwidth_words.saturating_sub(1);
    check_items(std::slice::from_ref(&items), limit)?;
    let root = tree.leader;
    let mut script: VecDeque<Message> = items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let tag = if i + 1 == items.len() { LAST_ITEM } else { ITEM };
            std::iter::once(tag).chain(item.words().iter().copied()).collect()
        })
        .collect();
    if items.is_empty() {
        script.push_back(Message::from_words(&[DONE]));
    }
    let n = net.graph().n();
    let clique = net.model().kind == ModelKind::Clique;
    let mut out = net.run(|info: NodeInfo<'_>| {
        let is_root = info.id == root;
        Downcast {
            targets: match (is_root, clique) {
                (true, true) => (0..n).filter(|&v| v != root).collect(),
                (false, true) => Vec::new(),
                _ => tree.children[info.id].clone(),
            },
            queue: if is_root { std::mem::take(&mut script) } else { VecDeque::new() },
            received: Vec::new(),
        }
    })?;
    out[root] = items;
    Ok(out)
}

struct FlagSend {
    outgoing: Option<Vec<bool>>,
    flag: Option<bool>,
}

impl NodeProgram for FlagSend {
    type Output = Option<bool>;

    fn step(&mut self, ctx: &mut StepContext<'_>) {
        if let Some((_, msg)) = ctx.inbox().first() {
            self.flag = Some(msg.word(0) == 1);
        }
        if let Some(flags) = self.outgoing.take() {
            for (v, &f) in flags.iter().enumerate() {
                if v != ctx.id() {
                    ctx.send(v, Message::from_words(&[u64::from(f)]));
                }
            }
        }
    }

    fn is_halted(&self) -> bool {
        self.outgoing.is_none()
    }

    fn into_output(self) -> Option<bool> {
        self.flag
    }
}

/// Clique only: `root` tells every node its own flag in a single round.
pub fn scatter_flags(net: &mut Network<'_>, root: usize, flags: Vec<bool>) -> Result<Vec<bool>> {
    let own = flags[root];
    let mut flags = Some(flags);
    let out = net.run(|info: NodeInfo<'_>| FlagSend {
        outgoing: if info.id == root { flags.take() } else { None },
        flag: None,
    })?;
    Ok(out.into_iter().enumerate().map(|(v, f)| if v == root { own } else { f.unwrap_or(false) }).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete, path, star};

    fn one_word_items(n: usize, per_node: usize) -> Vec<Vec<Message>> {
        (0..n).map(|v| (0..per_node).map(|i| Message::from_words(&[((v * per_node + i) % (n + 1)) as u64])).collect()).collect()
    }

    #[test]
    fn leader_on_path_and_clique() {
        let (tree, stats) = elect_leader_bfs(&path(3)).unwrap();
        assert_eq!(tree.leader, 0);
        assert_eq!(tree.depth, vec![0, 1, 2]);
        assert_eq!(tree.parent, vec![None, Some(0), Some(1)]);
        assert_eq!(tree.children, vec![vec![1], vec![2], vec![]]);
        assert!(stats.rounds <= 2 + 2);

        let (tree, _) = elect_leader_bfs(&complete(4)).unwrap();
        assert_eq!(tree.leader, 0);
        assert!(tree.depth.iter().all(|&d| d <= 1));
    }

    #[test]
    fn leader_on_star_with_high_center() {
        let g = Graph::from_edges(6, (0..5).map(|v| (v, 5))).unwrap();
        let (tree, stats) = elect_leader_bfs(&g).unwrap();
        assert_eq!(tree.leader, 0);
        assert_eq!(tree.depth[5], 1);
        assert_eq!(tree.depth[3], 2);
        assert_eq!(tree.parent[3], Some(5));
        // Diameter 2; flooding settles in diameter + 1 rounds.
        assert_eq!(stats.rounds, 3);
    }

    #[test]
    fn leader_rejects_disconnected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(elect_leader_bfs(&g).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn convergecast_gathers_everything() {
        let g = path(3);
        let (tree, _) = elect_leader_bfs(&g).unwrap();
        let (items, _) = pipelined_convergecast(&g, &tree, one_word_items(3, 1), Model::congest()).unwrap();
        let mut got: Vec<u64> = items.iter().map(|m| m.word(0)).collect();
        got.sort_unstable();
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn convergecast_round_bounds() {
        let g = star(6);
        let (tree, _) = elect_leader_bfs(&g).unwrap();
        let (items, stats) = pipelined_convergecast(&g, &tree, one_word_items(7, 2), Model::congest()).unwrap();
        assert_eq!(items.len(), 14);
        assert!(stats.rounds <= 2 * 7, "rounds {}", stats.rounds);
        assert_eq!(stats.rounds, 2);

        let g = complete(5);
        let (tree, _) = elect_leader_bfs(&g).unwrap();
        let (items, stats) = pipelined_convergecast(&g, &tree, one_word_items(5, 3), Model::clique()).unwrap();
        assert_eq!(items.len(), 15);
        assert_eq!(stats.rounds, 3);
    }

    #[test]
    fn oversized_item_is_an_encoding_error() {
        let g = path(2);
        let (tree, _) = elect_leader_bfs(&g).unwrap();
        let items = vec![vec![], vec![Message::from_words(&[0; 8])]];
        let err = pipelined_convergecast(&g, &tree, items, Model::congest()).unwrap_err();
        assert_eq!(err, Error::Sim(SimError::ItemTooLarge { node: 1, words: 8, limit: 7 }));
    }

    #[test]
    fn scatter_flags_takes_one_clique_round() {
        let g = path(4);
        let mut net = Network::new(&g, Model::clique(), 0);
        let flags = vec![true, false, true, true];
        assert_eq!(scatter_flags(&mut net, 0, flags.clone()).unwrap(), flags);
        assert_eq!(net.stats().rounds, 1);
        assert_eq!(net.stats().messages, 3);
    }

    #[test]
    fn downcast_reaches_every_node() {
        let g = path(5);
        let mut net = Network::new(&g, Model::congest(), 0);
        let tree = build_bfs_tree(&mut net).unwrap();
        let before = net.stats().rounds;
        let items: Vec<Message> = (0..3).map(|i| Message::from_words(&[i])).collect();
        let out = downcast(&mut net, &tree, items.clone()).unwrap();
        assert!(out.iter().all(|got| *got == items));
        // Pipelined: depth + items - 1 rounds.
        assert_eq!(net.stats().rounds - before, 4 + 3 - 1);
        let empty = downcast(&mut net, &tree, Vec::new()).unwrap();
        assert!(empty.iter().all(Vec::is_empty));
    }
}
