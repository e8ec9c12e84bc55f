//! The inertia groupoid and its decomposition over conjugacy classes.
//!
//! Objects of `ΛG` are loops `ℓ` of `G`; an arrow `(ℓ, h)` with
//! `src(h) = src(ℓ)` goes from `ℓ` to `h⁻¹·ℓ·h`, and `(ℓ, h)·(ℓ', k) = (ℓ, h·k)`.
//! For an action groupoid `X⫽G` each class `[g]` contributes the component
//! equivalent to `X^g⫽C_g`.

use std::sync::Arc;

use crate::action::{GroupAction, RestrictedAction};
use crate::functor::GroupoidFunctor;
use crate::group::{ConjugacyClasses, Subgroup};
use crate::groupoid::{ActionGroupoid, FiniteGroupoid, Subgroupoid};

#[derive(Debug, Clone)]
pub struct InertiaGroupoid {
    pub groupoid: Arc<FiniteGroupoid>,
    pub base: Arc<FiniteGroupoid>,
    /// Inertia object -> loop of the base.
    pub loops: Vec<usize>,
    object_of_loop: Vec<Option<usize>>,
    offsets: Vec<usize>,
}

impl InertiaGroupoid {
    pub fn new(base: Arc<FiniteGroupoid>) -> Self {
        let loops = base.loops();
        let mut object_of_loop = vec![None; base.arrows()];
        for (o, &l) in loops.iter().enumerate() {
            object_of_loop[l] = Some(o);
        }
        let mut offsets = Vec::with_capacity(loops.len());
        let mut arrows = Vec::new();
        let mut data = Vec::new();
        for (o, &l) in loops.iter().enumerate() {
            offsets.push(arrows.len());
            for &h in base.out_arrows(base.src(l)) {
                let target = object_of_loop[base.conjugate(l, h)].expect("conjugate of a loop");
                arrows.push((o, target));
                data.push((o, h));
            }
        }
        let arrow_of = |o: usize, h: usize| offsets[o] + base.out_rank(h);
        let unit = loops
            .iter()
            .enumerate()
            .map(|(o, &l)| arrow_of(o, base.unit(base.src(l))))
            .collect();
        let inverse = data
            .iter()
            .zip(&arrows)
            .map(|(&(_, h), &(_, t))| arrow_of(t, base.inverse(h)))
            .collect();
        let groupoid = FiniteGroupoid::from_parts(loops.len(), arrows, unit, inverse, |a, b| {
            let (o, h) = data[a];
            let (_, k) = data[b];
            arrow_of(o, base.compose(h, k))
        })
        .expect("inertia tables are well formed");
        InertiaGroupoid {
            groupoid: Arc::new(groupoid),
            base,
            loops,
            object_of_loop,
            offsets,
        }
    }

    /// The inertia object of a base loop.
    pub fn object(&self, base_loop: usize) -> Option<usize> {
        self.object_of_loop.get(base_loop).copied().flatten()
    }

    /// The inertia arrow `(ℓ, h)`.
    pub fn arrow(&self, object: usize, base_arrow: usize) -> usize {
        debug_assert_eq!(self.base.src(base_arrow), self.base.src(self.loops[object]));
        self.offsets[object] + self.base.out_rank(base_arrow)
    }

    /// `(ℓ, h)` for an inertia arrow.
    pub fn split(&self, arrow: usize) -> (usize, usize) {
        let o = self.groupoid.src(arrow);
        let l = self.loops[o];
        let h = self.base.out_arrows(self.base.src(l))[arrow - self.offsets[o]];
        (o, h)
    }
}

/// The piece of `Λ(X⫽G)` belonging to one conjugacy class.
#[derive(Debug, Clone)]
pub struct DecompositionComponent {
    /// Class representative `g` (least index in its class).
    pub rep: usize,
    pub centralizer: Subgroup,
    /// `X^g` acted on by `C_g`.
    pub restricted: RestrictedAction,
    /// `X^g⫽C_g`.
    pub domain: ActionGroupoid,
    /// Full subgroupoid of `Λ(X⫽G)` on the loops `(x, g')` with `g' ∈ [g]`.
    pub component: Subgroupoid,
    /// `X^g⫽C_g → component`, `x ↦ (x, g)`, `(x, h) ↦ ((x, g), (x, h))`.
    pub functor: GroupoidFunctor,
    /// The same functor composed with the inclusion into `Λ(X⫽G)`.
    pub into_inertia: GroupoidFunctor,
}

#[derive(Debug, Clone)]
pub struct InertiaDecomposition {
    pub action_groupoid: ActionGroupoid,
    pub inertia: InertiaGroupoid,
    pub classes: ConjugacyClasses,
    pub components: Vec<DecompositionComponent>,
}

impl InertiaDecomposition {
    pub fn new(action: Arc<GroupAction>) -> Self {
        Self::from_action_groupoid(ActionGroupoid::new(action))
    }

    pub fn from_action_groupoid(ag: ActionGroupoid) -> Self {
        let inertia = InertiaGroupoid::new(Arc::clone(&ag.groupoid));
        let group = Arc::clone(ag.group());
        let classes = group.conjugacy_classes();
        let components = classes
            .representatives()
            .into_iter()
            .map(|g| component_for(&ag, &inertia, &classes, g))
            .collect();
        InertiaDecomposition {
            action_groupoid: ag,
            inertia,
            classes,
            components,
        }
    }

    pub fn component(&self, rep: usize) -> Option<&DecompositionComponent> {
        self.components.iter().find(|c| c.rep == rep)
    }
}

fn component_for(
    ag: &ActionGroupoid,
    inertia: &InertiaGroupoid,
    classes: &ConjugacyClasses,
    g: usize,
) -> DecompositionComponent {
    let group = ag.group();
    let centralizer = group.centralizer(g);
    let fixed = ag.action.fixed_set(g);
    let restricted = ag
        .action
        .restrict(&centralizer, &fixed)
        .expect("centralizer preserves the fixed set");
    let domain = ActionGroupoid::new(Arc::new(restricted.action.clone()));
    let class = classes.class_of(g);
    let comp_objects: Vec<usize> = (0..inertia.groupoid.objects())
        .filter(|&o| {
            let (_, h) = ag.split(inertia.loops[o]);
            classes.class_of(h) == class
        })
        .collect();
    let component = inertia.groupoid.full_subgroupoid(&comp_objects);
    let mut local_obj = vec![usize::MAX; inertia.groupoid.objects()];
    for (i, &o) in component.objects.iter().enumerate() {
        local_obj[o] = i;
    }
    let mut local_arrow = vec![usize::MAX; inertia.groupoid.arrows()];
    for (i, &a) in component.arrows.iter().enumerate() {
        local_arrow[a] = i;
    }
    let d = &domain.groupoid;
    let obj_into: Vec<usize> = (0..d.objects())
        .map(|x| {
            let xa = restricted.points[x];
            inertia.object(ag.arrow(xa, g)).expect("(x, g) is a loop")
        })
        .collect();
    let arr_into: Vec<usize> = (0..d.arrows())
        .map(|a| {
            let (x, h) = domain.split(a);
            let o = obj_into[x];
            inertia.arrow(o, ag.arrow(restricted.points[x], restricted.embedding[h]))
        })
        .collect();
    let into_inertia = GroupoidFunctor::new(
        Arc::clone(d),
        Arc::clone(&inertia.groupoid),
        obj_into.clone(),
        arr_into.clone(),
    )
    .expect("inclusion of X^g⫽C_g is a functor");
    let functor = GroupoidFunctor::new(
        Arc::clone(d),
        Arc::clone(&component.groupoid),
        obj_into.iter().map(|&o| local_obj[o]).collect(),
        arr_into.iter().map(|&a| local_arrow[a]).collect(),
    )
    .expect("corestriction to the class component is a functor");
    DecompositionComponent {
        rep: g,
        centralizer,
        restricted,
        domain,
        component,
        functor,
        into_inertia,
    }
}
