# Experiments package 