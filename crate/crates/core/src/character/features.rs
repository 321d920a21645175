use super::CharacterModel;
use crate::physics2d::SimState;

pub fn feature_dim(model: &CharacterModel) -> usize {
    1 + 4 * model.num_links()
}

/// `[root height, then per link: position - root position (2), linear velocity (2)]`,
/// all in world axes. The root height is the root's world `y`.
pub fn agent_features(model: &CharacterModel, state: &SimState) -> Vec<f64> {
    let mut out = vec![0.0; feature_dim(model)];
    agent_features_into(model, state, &mut out);
    out
}

/// # Panics
/// If `out.len() != feature_dim(model)`.
pub fn agent_features_into(model: &CharacterModel, state: &SimState, out: &mut [f64]) {
    assert_eq!(out.len(), feature_dim(model));
    let root = state.bodies[model.root_link].position;
    out[0] = root.y;
    for (chunk, b) in out[1..].chunks_exact_mut(4).zip(&state.bodies) {
        let rel = b.position - root;
        chunk[0] = rel.x;
        chunk[1] = rel.y;
        chunk[2] = b.linear_velocity.x;
        chunk[3] = b.linear_velocity.y;
    }
}
