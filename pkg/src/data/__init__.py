"""Water-quality ingestion, labeling, scaling, rebalancing and splitting."""
