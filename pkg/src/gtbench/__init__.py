"""
gtbench - A finite-model workbench for non-normal modal logics over generalized topologies.
"""
