# Enables test discovery for stall_analysis.tests
