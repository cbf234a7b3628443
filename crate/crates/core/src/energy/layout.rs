use std::f64::consts::PI;

use rand::Rng;

use super::EnergyError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }

    fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, o: Point) -> f64 {
        self.sub(o).norm()
    }
}

/// Nodes of one pattern group and the index of its terminal node.
#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub nodes: Vec<Point>,
    pub terminal: usize,
}

impl Group {
    pub fn new(nodes: Vec<Point>, terminal: usize) -> Result<Self, EnergyError> {
        if nodes.is_empty() {
            return Err(EnergyError::DegenerateLayout("group has no nodes"));
        }
        if terminal >= nodes.len() {
            return Err(EnergyError::DegenerateLayout(
                "terminal is not a group node",
            ));
        }
        Ok(Self { nodes, terminal })
    }

    pub fn center(&self) -> Point {
        let n = self.nodes.len() as f64;
        let (sx, sy) = self
            .nodes
            .iter()
            .fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
        Point::new(sx / n, sy / n)
    }

    /// Largest node distance from the centre.
    pub fn radius(&self) -> f64 {
        let c = self.center();
        self.nodes.iter().map(|p| p.distance(c)).fold(0.0, f64::max)
    }

    fn terminal_offset(&self) -> Point {
        self.nodes[self.terminal].sub(self.center())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutSpec {
    pub group_a: Group,
    pub group_b: Group,
}

impl LayoutSpec {
    /// Centre-to-centre distance.
    pub fn separation(&self) -> f64 {
        self.group_a.center().distance(self.group_b.center())
    }
}

/// Terminal-to-terminal distance with both terminals on the facing sides of
/// their groups (`inward`) and with each mirrored through its group centre to
/// the far side (`outward`).
pub fn layout_distances(layout: &LayoutSpec) -> Result<(f64, f64), EnergyError> {
    for g in [&layout.group_a, &layout.group_b] {
        if g.nodes.is_empty() || g.terminal >= g.nodes.len() {
            return Err(EnergyError::DegenerateLayout(
                "terminal is not a group node",
            ));
        }
    }
    let ca = layout.group_a.center();
    let cb = layout.group_b.center();
    let axis = cb.sub(ca);
    if axis.norm() <= f64::EPSILON * (1.0 + ca.norm().max(cb.norm())) {
        return Err(EnergyError::DegenerateLayout("group centres coincide"));
    }
    // orient each terminal offset toward the other group
    let facing = |offset: Point, toward: Point| {
        if offset.dot(toward) < 0.0 {
            offset.neg()
        } else {
            offset
        }
    };
    let va = facing(layout.group_a.terminal_offset(), axis);
    let vb = facing(layout.group_b.terminal_offset(), axis.neg());
    let inward = ca.add(va).distance(cb.add(vb));
    let outward = ca.sub(va).distance(cb.sub(vb));
    Ok((inward, outward))
}

fn disk_point<R: Rng>(rng: &mut R, center: Point, radius: f64) -> Point {
    let r = radius * rng.gen::<f64>().sqrt();
    let theta = rng.gen_range(0.0..2.0 * PI);
    Point::new(center.x + r * theta.cos(), center.y + r * theta.sin())
}

fn random_group<R: Rng>(
    rng: &mut R,
    center: Point,
    radius: f64,
    nodes: usize,
    facing: f64,
) -> Group {
    // terminal on the rim, strictly inside the half-plane facing the other group
    let spread = rng.gen_range(-0.45 * PI..0.45 * PI);
    let angle = facing + spread;
    let terminal = Point::new(
        center.x + radius * angle.cos(),
        center.y + radius * angle.sin(),
    );
    let mut pts = vec![terminal];
    // the rest are placed symmetrically so the centroid stays at `center`
    for _ in 0..nodes.saturating_sub(1) / 2 {
        let p = disk_point(rng, center, radius);
        pts.push(p);
        pts.push(Point::new(2.0 * center.x - p.x, 2.0 * center.y - p.y));
    }
    pts.push(Point::new(
        2.0 * center.x - terminal.x,
        2.0 * center.y - terminal.y,
    ));
    Group {
        nodes: pts,
        terminal: 0,
    }
}

/// Random pair of equal-radius groups `separation` apart, each with its
/// terminal on the side facing the other.
pub fn mirrored_layout<R: Rng>(
    rng: &mut R,
    radius: f64,
    separation: f64,
    nodes: usize,
) -> LayoutSpec {
    let heading = rng.gen_range(0.0..2.0 * PI);
    let ca = disk_point(rng, Point::new(0.0, 0.0), 10.0 * radius);
    let cb = Point::new(
        ca.x + separation * heading.cos(),
        ca.y + separation * heading.sin(),
    );
    LayoutSpec {
        group_a: random_group(rng, ca, radius, nodes, heading),
        group_b: random_group(rng, cb, radius, nodes, heading + PI),
    }
}
