//! Graph construction and the product-graph operator.

pub mod content;
pub mod generators;
pub mod knn;
pub mod laplacian;
pub mod product;
pub mod ratings;

pub use content::{content_graph, content_graph_detailed, Axis, ContentGraph};
pub use generators::{community_graph, synthetic_netflix, SyntheticData, SyntheticParams};
pub use knn::{knn_feature_graph, DEFAULT_NEIGHBORS};
pub use laplacian::{graph_from_edges, graph_variation, laplacian_from_weights, GraphLaplacian};
pub use product::{lin_index, mat_index, product_apply, ProductOperator, Shape};
pub use ratings::RatingMatrix;
