"""Hardy-Rellich biharmonic heat equation laboratory."""
